#pragma once

// CSV and JSON serialization. Floating-point CSV fields use 17 significant
// digits so that every value round-trips exactly.

#include "kirchhoff/continuation.hpp"
#include "kirchhoff/extremal.hpp"
#include "kirchhoff/fiber.hpp"
#include "kirchhoff/gate.hpp"
#include "kirchhoff/nehari.hpp"
#include "kirchhoff/phase.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kirchhoff::io {

using json = nlohmann::ordered_json;

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (pos != s.size()) {
        throw std::invalid_argument("trailing characters in number: '" + s + "'");
    }
    return v;
}

// --- CSV primitives ----------------------------------------------------------

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else if (c == '\n' || c == '\r') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<std::vector<std::string>> read_csv(std::istream& in, const std::vector<std::string>& header) {
    std::string line;
    if (!std::getline(in, line) || csv_split(line) != header) {
        std::string expect;
        for (const auto& h : header) {
            expect += (expect.empty() ? "" : ",") + h;
        }
        throw std::invalid_argument("CSV header mismatch: expected '" + expect + "'");
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        auto fields = csv_split(line);
        if (fields.size() != header.size()) {
            throw std::invalid_argument("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(header.size()));
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

// --- grid functions and meshes ----------------------------------------------

inline void write_function_csv(std::ostream& out, const DiscreteFunction& u) {
    out << "r,value\n";
    const auto& r = u.mesh().nodes();
    for (std::size_t i = 0; i < u.size(); ++i) {
        out << format_double(r[i]) << ',' << format_double(u[i]) << '\n';
    }
}

inline void write_mesh_csv(std::ostream& out, const RadialMesh& mesh) {
    out << "r,weight\n";
    for (int i = 0; i <= mesh.M(); ++i) {
        out << format_double(mesh.nodes()[i]) << ',' << format_double(mesh.weights()[i]) << '\n';
    }
}

struct Columns {
    std::vector<double> x;
    std::vector<double> y;
};

inline Columns read_two_column_csv(std::istream& in, const std::string& second) {
    Columns c;
    for (const auto& row : read_csv(in, {"r", second})) {
        c.x.push_back(parse_double(row[0]));
        c.y.push_back(parse_double(row[1]));
    }
    return c;
}

/// Reads an `r,value` file written for `mesh`; the radii must match exactly.
inline DiscreteFunction read_function_csv(std::istream& in, const MeshPtr& mesh) {
    auto c = read_two_column_csv(in, "value");
    if (c.x != mesh->nodes()) {
        throw std::invalid_argument("function CSV radii do not match the mesh");
    }
    return DiscreteFunction(mesh, std::move(c.y));
}

// --- phase diagram -------------------------------------------------------------

inline const std::vector<std::string>& phase_header() {
    static const std::vector<std::string> h = {"a", "b", "regime", "regime_h", "lambda0_star_est",
                                               "nehari_empty_at_lambda0", "negative_energy_at_lambda0", "error"};
    return h;
}

inline void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells) {
    const auto& h = phase_header();
    for (std::size_t i = 0; i < h.size(); ++i) {
        out << (i ? "," : "") << h[i];
    }
    out << '\n';
    for (const auto& c : cells) {
        out << format_double(c.a) << ',' << format_double(c.b) << ',' << to_string(c.regime) << ','
            << to_string(c.regime_h) << ',' << (c.lambda0_star_est ? format_double(*c.lambda0_star_est) : "") << ','
            << (c.nehari_empty_at_lambda0 ? 1 : 0) << ',' << (c.negative_energy_at_lambda0 ? 1 : 0) << ','
            << csv_escape(c.error) << '\n';
    }
}

inline bool parse_flag(const std::string& s) {
    if (s == "1") {
        return true;
    }
    if (s == "0") {
        return false;
    }
    throw std::invalid_argument("expected 0 or 1, got '" + s + "'");
}

inline std::vector<PhaseCell> read_phase_csv(std::istream& in) {
    std::vector<PhaseCell> cells;
    for (const auto& row : read_csv(in, phase_header())) {
        PhaseCell c;
        c.a = parse_double(row[0]);
        c.b = parse_double(row[1]);
        const auto r = regime_from_string(row[2]);
        const auto rh = regime_from_string(row[3]);
        if (!r || !rh) {
            throw std::invalid_argument("unknown regime in phase CSV");
        }
        c.regime = *r;
        c.regime_h = *rh;
        if (!row[4].empty()) {
            c.lambda0_star_est = parse_double(row[4]);
        }
        c.nehari_empty_at_lambda0 = parse_flag(row[5]);
        c.negative_energy_at_lambda0 = parse_flag(row[6]);
        c.error = row[7];
        cells.push_back(std::move(c));
    }
    return cells;
}

// --- fiber samples -------------------------------------------------------------

/// `t,psi,dpsi` on a log grid spanning [t_lo, t_hi].
inline void write_fiber_samples_csv(std::ostream& out, const FiberInput& in, double t_lo, double t_hi, int count) {
    out << "t,psi,dpsi\n";
    for (int i = 0; i < count; ++i) {
        const double t = t_lo * std::pow(t_hi / t_lo, count > 1 ? static_cast<double>(i) / (count - 1) : 0.0);
        out << format_double(t) << ',' << format_double(psi(in, t)) << ',' << format_double(dpsi(in, t)) << '\n';
    }
}

// --- branch tables ---------------------------------------------------------------

inline void write_continuation_csv(std::ostream& out, const ContinuationResult& c) {
    out << "b,level,t_projection,pde_residual,dpsi_residual,d2psi,converged\n";
    for (std::size_t k = 0; k < c.steps.size(); ++k) {
        const auto& s = c.steps[k];
        out << format_double(c.b_values[k]) << ',' << format_double(s.level) << ',' << format_double(s.t_projection)
            << ',' << format_double(s.pde_residual) << ',' << format_double(s.dpsi_residual) << ','
            << format_double(s.d2psi) << ',' << (s.converged ? 1 : 0) << '\n';
    }
}

// --- JSON ----------------------------------------------------------------------------

inline json to_json(const ProblemParams& p) {
    return json{{"N", p.N}, {"a", p.a}, {"b", p.b}, {"lambda", p.lambda}, {"p", p.p}};
}

inline json to_json(const Constants& c) {
    return json{{"N", c.N}, {"S_N", c.S_N}, {"omega_N", c.omega_N}, {"C1", c.C1}, {"C2", c.C2}};
}

inline json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

inline json to_json(const FiberReport& r) {
    return json{{"class", to_string(r.cls)},
                {"t_minus", optional_json(r.t_minus)},
                {"t_plus", optional_json(r.t_plus)},
                {"t_degenerate", optional_json(r.t_degenerate)},
                {"energy_minus", optional_json(r.energy_minus)},
                {"energy_plus", optional_json(r.energy_plus)},
                {"t_star", r.t_star},
                {"margin", r.margin},
                {"residual_minus", r.residual_minus},
                {"residual_plus", r.residual_plus}};
}

inline json to_json(const ExtremalPoint& x) {
    return json{{"value", x.value}, {"t", x.t}, {"positive", x.positive}, {"cross_checked", x.cross_checked}};
}

inline json to_json(const FunctionalValues& f) {
    return json{{"A", f.A}, {"C", f.C}, {"P", f.P}, {"Q2", f.Q2}};
}

inline json to_json(const NehariResult& r) {
    return json{{"branch", to_string(r.branch)},
                {"level", r.level},
                {"converged", r.converged},
                {"iterations", r.iterations},
                {"t_projection", r.t_projection},
                {"gap_to_c0", optional_json(r.gap_to_c0)},
                {"dpsi_residual", r.dpsi_residual},
                {"d2psi", r.d2psi},
                {"pde_residual", r.pde_residual},
                {"suspect_branch", r.suspect_branch},
                {"degenerate_level", r.degenerate_level},
                {"stalled", r.stalled},
                {"functionals", to_json(r.values)}};
}

inline json to_json(const VerificationReport& v) {
    return json{{"pde_residual", v.pde_residual},
                {"pohozaev_defect", v.pohozaev_defect},
                {"energy", v.energy},
                {"boundary_slope", v.boundary_slope}};
}

inline json to_json(const ExtremalResult& r) {
    json starts = json::array();
    for (const auto& s : r.starts) {
        starts.push_back(json{{"label", s.label}, {"value", s.value}, {"iterations", s.iterations},
                              {"converged", s.converged}});
    }
    return json{{"kind", r.kind == ExtremalKind::Lambda0 ? "lambda0" : "lambda"},
                {"upper", r.upper},
                {"t", r.t},
                {"positive", r.positive},
                {"converged", r.converged},
                {"best_start", r.best_start},
                {"starts", starts}};
}

inline json to_json(const PhaseCell& c) {
    return json{{"a", c.a},
                {"b", c.b},
                {"regime", to_string(c.regime)},
                {"regime_h", to_string(c.regime_h)},
                {"lambda0_star_est", optional_json(c.lambda0_star_est)},
                {"nehari_empty_at_lambda0", c.nehari_empty_at_lambda0},
                {"negative_energy_at_lambda0", c.negative_energy_at_lambda0},
                {"error", c.error}};
}

inline json to_json(const ContinuationResult& c) {
    json steps = json::array();
    for (std::size_t k = 0; k < c.steps.size(); ++k) {
        json s = to_json(c.steps[k]);
        s["b"] = c.b_values[k];
        steps.push_back(std::move(s));
    }
    json out{{"b_values", c.b_values},
             {"completed", c.completed},
             {"aborted_at", c.aborted_at ? json(*c.aborted_at) : json(nullptr)},
             {"abort_reason", c.abort_reason},
             {"monotone", c.monotone},
             {"steps", steps}};
    out["limit_b"] = optional_json(c.limit_b);
    out["limit"] = c.limit ? to_json(*c.limit) : json(nullptr);
    return out;
}

inline json to_json(const GateResult& g) {
    return json{{"c_minus_0", optional_json(g.c_minus_0)},
                {"c0_level", g.c0_level},
                {"sigma", g.sigma},
                {"p0_estimate", optional_json(g.p0_estimate)},
                {"lambda_tilde_estimate", optional_json(g.lambda_tilde_estimate)},
                {"inconsistent", g.inconsistent},
                {"exists_hint", g.exists_hint}};
}

} // namespace kirchhoff::io
