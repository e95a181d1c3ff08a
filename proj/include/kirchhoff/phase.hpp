#pragma once

// (a, b) phase diagram relative to the two critical hyperbolas.

#include "kirchhoff/bubble.hpp"
#include "kirchhoff/extremal.hpp"
#include "kirchhoff/fiber.hpp"
#include "kirchhoff/parallel.hpp"
#include "kirchhoff/starts.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kirchhoff {

enum class Regime { BelowC1, OnC1, Between, OnC2, AboveC2 };

inline std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::BelowC1: return "BelowC1";
    case Regime::OnC1: return "OnC1";
    case Regime::Between: return "Between";
    case Regime::OnC2: return "OnC2";
    case Regime::AboveC2: return "AboveC2";
    }
    return "?";
}

inline std::optional<Regime> regime_from_string(std::string_view s) {
    for (auto r : {Regime::BelowC1, Regime::OnC1, Regime::Between, Regime::OnC2, Regime::AboveC2}) {
        if (to_string(r) == s) {
            return r;
        }
    }
    return std::nullopt;
}

/// Position of a^{(N-4)/2} b relative to C1 < C2, with a relative band for equality.
inline Regime classify_regime(double value, const CriticalConstants& cc, double band = tol_degenerate) {
    switch (compare_hyperbola(value, cc.C1, band)) {
    case HyperbolaSide::Below: return Regime::BelowC1;
    case HyperbolaSide::On: return Regime::OnC1;
    case HyperbolaSide::Above: break;
    }
    switch (compare_hyperbola(value, cc.C2, band)) {
    case HyperbolaSide::Below: return Regime::Between;
    case HyperbolaSide::On: return Regime::OnC2;
    case HyperbolaSide::Above: break;
    }
    return Regime::AboveC2;
}

struct PhaseCell {
    double a = 0.0;
    double b = 0.0;
    /// Against the closed-form S_N.
    Regime regime = Regime::BelowC1;
    /// Against the mesh constant S_h; this is the one consistent with the other fields.
    Regime regime_h = Regime::BelowC1;
    std::optional<double> lambda0_star_est;
    /// No sampled direction has a fiber with a local maximum at lambda = 0.
    bool nehari_empty_at_lambda0 = true;
    /// Some sampled direction has Phi_0(t u) < 0 for some t.
    bool negative_energy_at_lambda0 = false;
    std::string error;
};

enum class LambdaPolicy { None, Extremal };

struct PhaseOptions {
    int N = 5;
    double p = 3.0;
    LambdaPolicy lambda_policy = LambdaPolicy::None;
    int n_directions = 8;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    DescentOptions descent;
};

struct PhaseContext {
    double S_h = 0.0;
    CriticalConstants exact;
    CriticalConstants mesh_level;
    std::vector<StartDirection> directions;
};

/// Mesh constant and probe directions shared by every cell: the default
/// starts plus the discrete Sobolev minimizer.
inline PhaseContext phase_context(const MeshPtr& mesh, const PhaseOptions& opt) {
    PhaseContext ctx;
    const auto sob = discrete_sobolev_constant(mesh);
    ctx.S_h = sob.S_h;
    ctx.exact = critical_constants(mesh->N(), sobolev_constant(mesh->N()).S_N);
    ctx.mesh_level = critical_constants(mesh->N(), sob.S_h);
    ctx.directions = default_starts(mesh, opt.n_directions, opt.seed);
    ctx.directions.push_back({"sobolev minimizer", sob.minimizer});
    return ctx;
}

inline PhaseCell phase_cell(double a, double b, const PhaseContext& ctx, const std::vector<FunctionalValues>& fvs,
                            const PhaseOptions& opt) {
    PhaseCell cell;
    cell.a = a;
    cell.b = b;
    try {
        ProblemParams pr{opt.N, a, b, 0.0, opt.p};
        pr.validate();
        const double hv = pr.hyperbola_value();
        cell.regime = classify_regime(hv, ctx.exact);
        cell.regime_h = classify_regime(hv, ctx.mesh_level);
        for (const auto& fv : fvs) {
            const FiberInput in{fv.A, fv.C, fv.P, pr};
            const auto rep = classify_fiber(in);
            if (rep.t_minus) {
                cell.nehari_empty_at_lambda0 = false;
            }
            if (fiber_infimum(in) < 0.0) {
                cell.negative_energy_at_lambda0 = true;
            }
        }
        if (opt.lambda_policy == LambdaPolicy::Extremal && b > 0.0) {
            cell.lambda0_star_est = extremal_from(pr, ExtremalKind::Lambda0, ctx.directions, opt.descent).upper;
        }
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    return cell;
}

/// One cell per (a, b) pair, a-major order. Cells are independent and run
/// as a parallel map; the output does not depend on the thread count.
inline std::vector<PhaseCell> phase_diagram(const std::vector<double>& a_values, const std::vector<double>& b_values,
                                            const MeshPtr& mesh, const PhaseOptions& opt = {}) {
    if (mesh->N() != opt.N) {
        throw std::invalid_argument("phase_diagram: mesh dimension differs from N");
    }
    const auto ctx = phase_context(mesh, opt);
    std::vector<FunctionalValues> fvs;
    for (const auto& d : ctx.directions) {
        fvs.push_back(functionals(d.u, opt.p));
    }
    const std::size_t nb = b_values.size();
    return parallel_map(
        a_values.size() * nb,
        [&](std::size_t i) { return phase_cell(a_values[i / nb], b_values[i % nb], ctx, fvs, opt); }, opt.threads);
}

} // namespace kirchhoff
