#pragma once

// Command-line front end. `run_cli` is kept separate from main() so tests
// can drive it in-process.

#include "kirchhoff/kirchhoff.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace kirchhoff::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, invalid_input = 1, flagged = 2 };

/// Inclusive linear grid from "lo:hi:count".
inline std::vector<double> parse_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw std::invalid_argument("range must be lo:hi:count, got '" + spec + "'");
    }
    const double lo = io::parse_double(parts[0]);
    const double hi = io::parse_double(parts[1]);
    int count = 0;
    try {
        std::size_t pos = 0;
        count = std::stoi(parts[2], &pos);
        if (pos != parts[2].size()) {
            throw std::invalid_argument("");
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("range count must be an integer, got '" + parts[2] + "'");
    }
    if (count < 1) {
        throw std::invalid_argument("range count must be at least 1");
    }
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
    return out;
}

inline std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(io::parse_double(item));
    }
    if (out.empty()) {
        throw std::invalid_argument("empty list");
    }
    return out;
}

struct RunConfig {
    std::string command;
    ProblemParams params{5, 1.0, 0.0, 0.0, 3.0};
    int mesh_size = 256;
    std::string grading = "graded";
    int n_starts = 8;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool json_output = false;
    std::string out_path;

    // command specific
    std::string a_list = "0.5,1,2";
    double A = 1.0;
    double C = 1.0;
    double P = 1.0;
    std::string samples_csv;
    int samples = 200;
    std::string kind = "both";
    bool gate = false;
    std::string minimizer_csv;
    std::string a_range = "0.5:2:16";
    std::string b_range = "0.01:0.5:16";
    std::string lambda_policy = "none";
    std::string b_seq = "0.2,0.1,0.05,0.02,0.01,0";

    void validate() const {
        if (command != "constants") {
            params.validate();
        }
        if (mesh_size < 64) {
            throw std::invalid_argument("--mesh-size must be at least 64");
        }
        grading_from_string(grading);
        if (n_starts < 1) {
            throw std::invalid_argument("--n-starts must be positive");
        }
    }
};

/// Fields of a JSON config file use the long flag names with '-' replaced by '_'.
inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config file must contain a JSON object");
    }
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "N") cfg.params.N = v.get<int>();
            else if (key == "a") cfg.params.a = v.get<double>();
            else if (key == "b") cfg.params.b = v.get<double>();
            else if (key == "lambda") cfg.params.lambda = v.get<double>();
            else if (key == "p") cfg.params.p = v.get<double>();
            else if (key == "mesh_size") cfg.mesh_size = v.get<int>();
            else if (key == "grading") cfg.grading = v.get<std::string>();
            else if (key == "n_starts") cfg.n_starts = v.get<int>();
            else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
            else if (key == "threads") cfg.threads = v.get<unsigned>();
            else if (key == "a_list") cfg.a_list = v.get<std::string>();
            else if (key == "A") cfg.A = v.get<double>();
            else if (key == "C") cfg.C = v.get<double>();
            else if (key == "P") cfg.P = v.get<double>();
            else if (key == "samples") cfg.samples = v.get<int>();
            else if (key == "kind") cfg.kind = v.get<std::string>();
            else if (key == "gate") cfg.gate = v.get<bool>();
            else if (key == "a_range") cfg.a_range = v.get<std::string>();
            else if (key == "b_range") cfg.b_range = v.get<std::string>();
            else if (key == "lambda_policy") cfg.lambda_policy = v.get<std::string>();
            else if (key == "b_seq") cfg.b_seq = v.get<std::string>();
            else throw std::invalid_argument("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config file has a value of the wrong type: ") + e.what());
    }
}

struct Output {
    Output() = default;
    Output(std::string t, int c, std::optional<json> d = std::nullopt)
        : text(std::move(t)), code(c), diagnostic(std::move(d)) {}

    std::string text;
    int code = ok;
    /// Written to the error stream when set, e.g. an aborted continuation.
    std::optional<json> diagnostic;
};

inline json error_record(const std::string& type, const std::string& message, int code) {
    return json{{"error", json{{"type", type}, {"message", message}, {"exit_code", code}}}};
}

inline MeshPtr mesh_for(const RunConfig& cfg) {
    return make_mesh(cfg.params.N, cfg.mesh_size, grading_from_string(cfg.grading));
}

inline json mesh_json(const MeshPtr& mesh, double S_h) {
    return json{{"M", mesh->M()}, {"grading", to_string(mesh->grading())}, {"S_h", S_h}};
}

// --- commands ---------------------------------------------------------------

inline Output cmd_constants(const RunConfig& cfg) {
    const auto c = sobolev_constant(cfg.params.N);
    const auto as = parse_list(cfg.a_list);
    const int N = c.N;
    const double ratio = c.C1 / c.C2;
    json rows = json::array();
    for (double a : as) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("a values must be positive");
        }
        const double s = std::pow(a, -0.5 * (N - 4));
        rows.push_back(json{{"a", a}, {"b_C1", c.C1 * s}, {"b_C2", c.C2 * s}, {"ratio", ratio}});
    }
    if (cfg.json_output) {
        json j = io::to_json(c);
        j["ratio"] = ratio;
        j["talenti"] = talenti_constant(N);
        j["hyperbolas"] = rows;
        return {j.dump(2) + "\n", ok};
    }
    std::ostringstream os;
    os << "N        " << N << "\n"
       << "S_N      " << io::format_double(c.S_N) << "\n"
       << "omega_N  " << io::format_double(c.omega_N) << "\n"
       << "C1       " << io::format_double(c.C1) << "\n"
       << "C2       " << io::format_double(c.C2) << "\n"
       << "C1/C2    " << io::format_double(ratio) << "\n\n"
       << "a,b_C1,b_C2,ratio\n";
    for (const auto& r : rows) {
        os << io::format_double(r["a"].get<double>()) << ',' << io::format_double(r["b_C1"].get<double>()) << ','
           << io::format_double(r["b_C2"].get<double>()) << ',' << io::format_double(r["ratio"].get<double>())
           << '\n';
    }
    return {os.str(), ok};
}

inline Output cmd_fiber(const RunConfig& cfg) {
    const FiberInput in{cfg.A, cfg.C, cfg.P, cfg.params};
    in.validate();
    const auto rep = classify_fiber(in);
    json j{{"params", io::to_json(cfg.params)}, {"input", json{{"A", in.A}, {"C", in.C}, {"P", in.P}}}};
    j["report"] = io::to_json(rep);
    if (in.P > 0.0 && cfg.params.b > 0.0) {
        j["lambda0_of_u"] = io::to_json(lambda0_of_u(in));
        j["lambda_of_u"] = io::to_json(lambda_of_u(in));
    }
    j["closed_forms"] = [&] {
        const auto b = threshold_closed_forms(in.A, in.C, cfg.params.a, cfg.params.N);
        return json{{"t0_u", b.t0_u}, {"b0_u", b.b0_u}, {"t_u", b.t_u}, {"b_u", b.b_u}};
    }();
    if (!cfg.samples_csv.empty()) {
        if (cfg.samples < 2) {
            throw std::invalid_argument("--samples must be at least 2");
        }
        std::ofstream f(cfg.samples_csv);
        if (!f) {
            throw std::invalid_argument("cannot write '" + cfg.samples_csv + "'");
        }
        io::write_fiber_samples_csv(f, in, 1e-6 * rep.t_star, 1e3 * rep.t_star, cfg.samples);
    }
    return {j.dump(2) + "\n", ok};
}

inline Output cmd_extremal(const RunConfig& cfg) {
    if (cfg.kind != "lambda0" && cfg.kind != "lambda" && cfg.kind != "both") {
        throw std::invalid_argument("--kind must be lambda0, lambda or both");
    }
    const auto mesh = mesh_for(cfg);
    const auto sob = discrete_sobolev_constant(mesh);
    const auto cc = critical_constants(cfg.params.N, sob.S_h);
    json j{{"params", io::to_json(cfg.params.with_lambda(0.0))}, {"mesh", mesh_json(mesh, sob.S_h)}};
    j["regime_h"] = to_string(classify_regime(cfg.params.hyperbola_value(), cc));
    const std::vector<StartDirection> extra{{"sobolev minimizer", sob.minimizer}};
    bool converged = true;
    if (cfg.kind != "lambda") {
        const auto r = extremal_lambda0(cfg.params, mesh, cfg.n_starts, cfg.seed, extra);
        j["lambda0_star"] = io::to_json(r);
        converged = converged && r.converged;
    }
    if (cfg.kind != "lambda0") {
        const auto r = extremal_lambda(cfg.params, mesh, cfg.n_starts, cfg.seed, extra);
        j["lambda_star"] = io::to_json(r);
        converged = converged && r.converged;
    }
    return {j.dump(2) + "\n", converged ? ok : flagged};
}

inline Output cmd_nehari(const RunConfig& cfg) {
    const auto mesh = mesh_for(cfg);
    const auto sob = discrete_sobolev_constant(mesh);
    const auto& pr = cfg.params;
    json j{{"params", io::to_json(pr)}, {"mesh", mesh_json(mesh, sob.S_h)}};
    if (pr.b > 0.0) {
        j["c0_bound"] = c0_level(pr.N, pr.a, pr.b);
        j["sigma_bound"] = sigma_lower_bound(pr.a, pr.b, pr.p);
    }
    j["mountain_pass_level"] = "not computed; the N^- level is reported as the candidate";
    int code = ok;
    const auto minus = nehari_minus_minimize(pr, sob.minimizer);
    j["nehari_minus"] = io::to_json(minus);
    if (!minus.converged || minus.suspect_branch || minus.degenerate_level) {
        code = flagged;
    }
    if (!cfg.minimizer_csv.empty()) {
        std::ofstream f(cfg.minimizer_csv);
        if (!f) {
            throw std::invalid_argument("cannot write '" + cfg.minimizer_csv + "'");
        }
        io::write_function_csv(f, minus.minimizer);
    }
    if (pr.b > 0.0) {
        const auto g = global_minimize(pr, sob.minimizer);
        json gj = io::to_json(g.result);
        gj["ray_probe_min"] = g.ray_probe_min;
        j["global"] = gj;
        if (!g.result.converged) {
            code = flagged;
        }
        if (cfg.gate) {
            const auto gate = second_solution_gate(pr, sob.minimizer);
            j["second_solution_gate"] = io::to_json(gate);
            if (gate.inconsistent) {
                code = flagged;
            }
        }
    }
    return {j.dump(2) + "\n", code};
}

inline Output cmd_phase(const RunConfig& cfg) {
    if (cfg.lambda_policy != "none" && cfg.lambda_policy != "extremal") {
        throw std::invalid_argument("--lambda-policy must be none or extremal");
    }
    const auto as = parse_range(cfg.a_range);
    const auto bs = parse_range(cfg.b_range);
    for (double a : as) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("a values must be positive");
        }
    }
    for (double b : bs) {
        if (!(b >= 0.0)) {
            throw std::invalid_argument("b values must be non-negative");
        }
    }
    PhaseOptions opt;
    opt.N = cfg.params.N;
    opt.p = cfg.params.p;
    opt.lambda_policy = cfg.lambda_policy == "extremal" ? LambdaPolicy::Extremal : LambdaPolicy::None;
    opt.n_directions = cfg.n_starts;
    opt.seed = cfg.seed;
    opt.threads = cfg.threads;
    const auto cells = phase_diagram(as, bs, mesh_for(cfg), opt);
    int code = ok;
    for (const auto& c : cells) {
        if (!c.error.empty()) {
            code = flagged;
        }
    }
    if (cfg.json_output) {
        json arr = json::array();
        for (const auto& c : cells) {
            arr.push_back(io::to_json(c));
        }
        return {arr.dump(2) + "\n", code};
    }
    std::ostringstream os;
    io::write_phase_csv(os, cells);
    return {os.str(), code};
}

inline Output cmd_bnlimit(const RunConfig& cfg) {
    const auto mesh = mesh_for(cfg);
    const auto sob = discrete_sobolev_constant(mesh);
    const auto bs = parse_list(cfg.b_seq);
    const auto res = continuation_b_to_zero(cfg.params, bs, sob.minimizer);
    const int code = res.completed && res.monotone ? ok : flagged;
    std::optional<json> diag;
    if (res.aborted_at) {
        diag = error_record("continuation_aborted", res.abort_reason, flagged);
        (*diag)["error"]["b"] = bs[*res.aborted_at];
    } else if (!res.monotone) {
        diag = error_record("non_monotone", "levels increase along the b sequence", flagged);
    }
    if (!cfg.minimizer_csv.empty() && !res.steps.empty()) {
        std::ofstream f(cfg.minimizer_csv);
        if (!f) {
            throw std::invalid_argument("cannot write '" + cfg.minimizer_csv + "'");
        }
        io::write_function_csv(f, res.steps.back().minimizer);
    }
    if (cfg.json_output) {
        json j{{"params", io::to_json(cfg.params)}, {"mesh", mesh_json(mesh, sob.S_h)}};
        j["bound"] = std::pow(sob.S_h, 0.5 * cfg.params.N) / cfg.params.N;
        j["continuation"] = io::to_json(res);
        return {j.dump(2) + "\n", code, diag};
    }
    std::ostringstream os;
    io::write_continuation_csv(os, res);
    return {os.str(), code, diag};
}

// --- driver -------------------------------------------------------------------

/// Parses argv, runs the command, writes the result to `out` (or the --out
/// file) and returns the exit code. Errors produce a JSON error record.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string config_path;
    CLI::App app{"Fibering analysis of the critical Kirchhoff problem"};
    app.require_subcommand(1);
    app.fallthrough();

    std::vector<CLI::Option*> param_opts;
    app.add_flag("--json", cfg.json_output, "emit JSON");
    app.add_option("--out", cfg.out_path, "write the primary output to this file");
    auto* o_seed = app.add_option("--seed", cfg.seed, "seed for random start profiles");
    auto* o_mesh = app.add_option("--mesh-size", cfg.mesh_size, "number of radial cells M");
    auto* o_grading = app.add_option("--grading", cfg.grading, "uniform or graded");
    app.add_option("--config", config_path, "JSON config file; flags take precedence");
    auto* o_N = app.add_option("--N", cfg.params.N, "dimension");
    auto* o_a = app.add_option("--a", cfg.params.a, "Kirchhoff constant a");
    auto* o_b = app.add_option("--b", cfg.params.b, "Kirchhoff coefficient b");
    auto* o_l = app.add_option("--lambda", cfg.params.lambda, "perturbation parameter");
    auto* o_p = app.add_option("--p", cfg.params.p, "subcritical exponent");
    auto* o_starts = app.add_option("--n-starts", cfg.n_starts, "multi-start count / probe directions");
    auto* o_threads = app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");

    auto* constants = app.add_subcommand("constants", "S_N, omega_N, C1, C2 and the hyperbola table");
    auto* o_alist = constants->add_option("--a-list", cfg.a_list, "comma-separated a values");

    auto* fiber = app.add_subcommand("fiber", "classify one fiber map");
    auto* o_A = fiber->add_option("--A", cfg.A, "|u|^2");
    auto* o_C = fiber->add_option("--C", cfg.C, "|u|_{2*}^{2*}");
    auto* o_P = fiber->add_option("--P", cfg.P, "|u|_p^p");
    fiber->add_option("--samples-csv", cfg.samples_csv, "write t,psi,dpsi samples here");
    auto* o_samples = fiber->add_option("--samples", cfg.samples, "number of samples");

    auto* extremal = app.add_subcommand("extremal", "upper bounds for lambda_0^* and lambda^*");
    auto* o_kind = extremal->add_option("--kind", cfg.kind, "lambda0, lambda or both");

    auto* nehari = app.add_subcommand("nehari", "N^- level, global minimum and second-solution gate");
    auto* o_gate = nehari->add_flag("--gate", cfg.gate, "also run the second-solution gate");
    nehari->add_option("--minimizer-csv", cfg.minimizer_csv, "write the N^- minimizer (r,value)");

    auto* phase = app.add_subcommand("phase", "(a, b) phase diagram");
    auto* o_ar = phase->add_option("--a-range", cfg.a_range, "lo:hi:count");
    auto* o_br = phase->add_option("--b-range", cfg.b_range, "lo:hi:count");
    auto* o_lp = phase->add_option("--lambda-policy", cfg.lambda_policy, "none or extremal");

    auto* bnlimit = app.add_subcommand("bnlimit", "continuation b -> 0 at fixed lambda");
    auto* o_bseq = bnlimit->add_option("--b-seq", cfg.b_seq, "comma-separated decreasing b values");
    bnlimit->add_option("--minimizer-csv", cfg.minimizer_csv, "write the final minimizer (r,value)");

    auto emit = [&](const std::string& text) {
        if (cfg.out_path.empty()) {
            out << text;
            return;
        }
        std::ofstream f(cfg.out_path, std::ios::binary);
        f << text;
        if (!f) {
            err << "cannot write '" << cfg.out_path << "'\n";
        }
    };
    auto fail = [&](const std::string& type, const std::string& msg, int code) {
        const std::string rec = error_record(type, msg, code).dump() + "\n";
        err << rec;
        if (!cfg.out_path.empty()) {
            emit(rec);
        }
        return code;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        return fail("invalid_input", e.what(), invalid_input);
    }

    try {
        if (!config_path.empty()) {
            // Re-apply explicitly given flags on top of the file values.
            RunConfig flags = cfg;
            apply_config_file(cfg, config_path);
            auto keep = [](CLI::Option* o, auto& dst, const auto& src) {
                if (o->count() > 0) {
                    dst = src;
                }
            };
            keep(o_seed, cfg.seed, flags.seed);
            keep(o_mesh, cfg.mesh_size, flags.mesh_size);
            keep(o_grading, cfg.grading, flags.grading);
            keep(o_N, cfg.params.N, flags.params.N);
            keep(o_a, cfg.params.a, flags.params.a);
            keep(o_b, cfg.params.b, flags.params.b);
            keep(o_l, cfg.params.lambda, flags.params.lambda);
            keep(o_p, cfg.params.p, flags.params.p);
            keep(o_starts, cfg.n_starts, flags.n_starts);
            keep(o_threads, cfg.threads, flags.threads);
            keep(o_alist, cfg.a_list, flags.a_list);
            keep(o_A, cfg.A, flags.A);
            keep(o_C, cfg.C, flags.C);
            keep(o_P, cfg.P, flags.P);
            keep(o_samples, cfg.samples, flags.samples);
            keep(o_kind, cfg.kind, flags.kind);
            keep(o_gate, cfg.gate, flags.gate);
            keep(o_ar, cfg.a_range, flags.a_range);
            keep(o_br, cfg.b_range, flags.b_range);
            keep(o_lp, cfg.lambda_policy, flags.lambda_policy);
            keep(o_bseq, cfg.b_seq, flags.b_seq);
        }
        Output result;
        if (constants->parsed()) {
            cfg.command = "constants";
            cfg.validate();
            result = cmd_constants(cfg);
        } else if (fiber->parsed()) {
            cfg.command = "fiber";
            cfg.validate();
            result = cmd_fiber(cfg);
        } else if (extremal->parsed()) {
            cfg.command = "extremal";
            cfg.validate();
            result = cmd_extremal(cfg);
        } else if (nehari->parsed()) {
            cfg.command = "nehari";
            cfg.validate();
            result = cmd_nehari(cfg);
        } else if (phase->parsed()) {
            cfg.command = "phase";
            cfg.validate();
            result = cmd_phase(cfg);
        } else {
            cfg.command = "bnlimit";
            cfg.validate();
            result = cmd_bnlimit(cfg);
        }
        emit(result.text);
        if (result.diagnostic) {
            err << result.diagnostic->dump() << '\n';
        }
        return result.code;
    } catch (const std::invalid_argument& e) {
        return fail("invalid_input", e.what(), invalid_input);
    } catch (const nehari_empty_error& e) {
        return fail("nehari_empty", e.what(), flagged);
    } catch (const numerical_error& e) {
        return fail("numerical_error", e.what(), flagged);
    } catch (const std::exception& e) {
        return fail("error", e.what(), flagged);
    }
}

} // namespace kirchhoff::cli
