#pragma once

// Nehari-branch and global minimization on the radial mesh.

#include "kirchhoff/descent.hpp"
#include "kirchhoff/discrete.hpp"
#include "kirchhoff/fiber.hpp"
#include "kirchhoff/verify.hpp"

#include <cmath>
#include <optional>
#include <string_view>

namespace kirchhoff {

/// The fiber of the start direction has no local maximum: N^- is empty along it.
class nehari_empty_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

enum class Branch { Nminus, Nplus, Global };

inline std::string_view to_string(Branch b) {
    switch (b) {
    case Branch::Nminus: return "Nminus";
    case Branch::Nplus: return "Nplus";
    case Branch::Global: return "Global";
    }
    return "?";
}

struct NehariResult {
    double level = 0.0;
    /// Rescaled so that t = 1 is the selected critical point of its own fiber.
    DiscreteFunction minimizer;
    Branch branch = Branch::Nminus;
    /// Fiber parameter applied to the last unit-norm direction.
    double t_projection = 0.0;
    int iterations = 0;
    bool converged = false;
    /// level - (2*-2)^2 a^2 / (4 2* (4-2*) b), when b > 0.
    std::optional<double> gap_to_c0;
    FunctionalValues values;
    /// |psi'(1)| relative to its largest term, and psi''(1), for the minimizer's fiber.
    double dpsi_residual = 0.0;
    double d2psi = 0.0;
    /// H^1 norm of the energy gradient at the minimizer.
    double pde_residual = 0.0;
    /// Level above the c^0 bound: the iteration probably left the branch.
    bool suspect_branch = false;
    /// Level within 1e-6 (relative) of the c^0 level, which no Palais-Smale level can take.
    bool degenerate_level = false;
    bool stalled = false;
};

struct SolverOptions {
    DescentOptions descent;
    /// Accepted |psi'(1)| relative to its largest term.
    double dpsi_tol = 1e-8;
    double degenerate_band = 1e-6;
    /// Refine the descent result with Newton steps on the Euler-Lagrange equation.
    bool polish = true;
};

namespace detail {

inline FiberInput fiber_input(const FunctionalValues& fv, const ProblemParams& pr) {
    return FiberInput{fv.A, fv.C, fv.P, pr};
}

// Critical point of the fiber selected by `branch` (t- for Nminus, t+ otherwise).
inline std::optional<double> branch_point(const FiberReport& rep, Branch branch) {
    if (branch == Branch::Nminus) {
        return rep.t_minus;
    }
    return rep.t_plus;
}

// E(u) = psi_u(t_branch(u)) with gradient t-derivative eliminated (psi'(t) = 0).
inline std::optional<ObjectiveValue> branch_objective(const DiscreteFunction& u, const ProblemParams& pr, Branch branch) {
    auto pi = power_integrals(u, pr.p, true);
    const auto& fv = pi.values;
    if (!(fv.C > 0.0) || !(fv.A > 0.0)) {
        return std::nullopt;
    }
    const auto in = fiber_input(fv, pr);
    const auto rep = classify_fiber(in);
    const auto t = branch_point(rep, branch);
    if (!t) {
        return std::nullopt;
    }
    const double tt = *t;
    const double q = pr.q();
    const double ka = pr.a * tt * tt + pr.b * tt * tt * tt * tt * fv.A;
    const double tq = std::pow(tt, q);
    const double tp = pr.lambda * std::pow(tt, pr.p);
    auto g = stiffness_apply(u.mesh(), u.values());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = ka * g[i] - tq * pi.load_q[i] - tp * pi.load_p[i];
    }
    return ObjectiveValue{psi(in, tt), std::move(g)};
}

inline void finish_result(NehariResult& out, const ProblemParams& pr, const SolverOptions& opt) {
    if (out.minimizer.is_zero()) {
        out.values = {};
        out.dpsi_residual = 0.0;
        out.d2psi = 0.0;
        out.pde_residual = 0.0;
    } else {
        const auto eg = energy_and_gradient(out.minimizer, pr);
        out.values = eg.values;
        out.pde_residual = eg.grad_norm;
        const auto in = fiber_input(eg.values, pr);
        out.dpsi_residual = std::abs(dpsi(in, 1.0)) / dpsi_scale(in, 1.0);
        out.d2psi = d2psi(in, 1.0);
    }
    if (pr.b > 0.0) {
        const double c0 = c0_level(pr.N, pr.a, pr.b);
        out.gap_to_c0 = out.level - c0;
        if (out.branch == Branch::Nminus) {
            out.suspect_branch = out.level > c0;
            out.degenerate_level = std::abs(out.level - c0) <= opt.degenerate_band * c0;
        }
    }
}

} // namespace detail

/// Minimizes Phi_lambda(t(u) u) over unit directions u, where t(u) is the
/// fiber critical point of the requested branch (Nminus or Nplus).
inline NehariResult nehari_branch_minimize(const ProblemParams& params, const DiscreteFunction& start, Branch branch,
                                           const SolverOptions& opt = {}) {
    params.validate();
    if (branch == Branch::Global) {
        throw std::invalid_argument("nehari_branch_minimize: use global_minimize for the global branch");
    }
    if (start.mesh().N() != params.N) {
        throw std::invalid_argument("nehari_branch_minimize: mesh dimension differs from params.N");
    }
    if (start.is_zero()) {
        throw std::invalid_argument("nehari_branch_minimize: zero start");
    }
    const auto start_rep = classify_fiber(detail::fiber_input(functionals(start, params), params));
    if (!detail::branch_point(start_rep, branch)) {
        throw nehari_empty_error(std::string("Nehari empty along start: fiber is ") +
                                 std::string(to_string(start_rep.cls)) + ", no " +
                                 (branch == Branch::Nminus ? "local maximum" : "local minimum"));
    }
    auto obj = [&](const DiscreteFunction& u) { return detail::branch_objective(u, params, branch); };
    const auto res = descend(obj, start, true, opt.descent);

    NehariResult out;
    out.branch = branch;
    out.level = res.value;
    out.iterations = res.iterations;
    out.stalled = res.stalled;
    const auto rep = classify_fiber(detail::fiber_input(functionals(res.u, params), params));
    const auto t = detail::branch_point(rep, branch);
    if (!t) {
        throw numerical_error("nehari_branch_minimize: final iterate left the branch");
    }
    out.t_projection = *t;
    out.minimizer = res.u.scaled(*t);
    if (opt.polish) {
        out.minimizer = newton_polish(out.minimizer, params).u;
        out.level = energy(out.minimizer, params);
    }
    detail::finish_result(out, params, opt);
    const bool sign_ok = branch == Branch::Nminus ? out.d2psi < 0.0 : out.d2psi > 0.0;
    out.converged = res.converged && out.dpsi_residual <= opt.dpsi_tol && sign_ok;
    return out;
}

/// c^- = inf of Phi_lambda over N^-.
inline NehariResult nehari_minus_minimize(const ProblemParams& params, const DiscreteFunction& start,
                                          const SolverOptions& opt = {}) {
    return nehari_branch_minimize(params, start, Branch::Nminus, opt);
}

struct GlobalResult {
    NehariResult result;
    /// min(0, Phi(t u_start)) over the sampled ray.
    double ray_probe_min = 0.0;
};

/// I_lambda = inf Phi_lambda. A negative infimum is reached through the fiber
/// local minima (the N^+ branch) and then polished by free descent; otherwise
/// 0 is returned with the zero function.
inline GlobalResult global_minimize(const ProblemParams& params, const DiscreteFunction& start,
                                    const SolverOptions& opt = {}) {
    params.validate();
    if (!(params.b > 0.0)) {
        throw std::invalid_argument("global_minimize: b = 0 is not coercive (the infimum is -infinity)");
    }
    if (start.is_zero()) {
        throw std::invalid_argument("global_minimize: zero start");
    }
    GlobalResult g;
    const auto fv0 = functionals(start, params);
    const auto in0 = detail::fiber_input(fv0, params);
    const auto rep0 = classify_fiber(in0);
    const double t_ref = rep0.t_star;
    for (int k = 0; k <= 400; ++k) {
        const double t = t_ref * std::pow(10.0, -3.0 + 6.0 * k / 400.0);
        g.ray_probe_min = std::min(g.ray_probe_min, psi(in0, t));
    }

    NehariResult& out = g.result;
    out.branch = Branch::Global;
    out.minimizer = DiscreteFunction(start.mesh_ptr());
    out.converged = true;
    if (rep0.t_plus) {
        auto obj = [&](const DiscreteFunction& u) { return detail::branch_objective(u, params, Branch::Nplus); };
        const auto plus = descend(obj, start, true, opt.descent);
        out.iterations = plus.iterations;
        out.stalled = plus.stalled;
        if (plus.value < 0.0) {
            const auto rep = classify_fiber(detail::fiber_input(functionals(plus.u, params), params));
            const double tp = rep.t_plus.value_or(1.0);
            auto free_obj = [&](const DiscreteFunction& u) -> std::optional<ObjectiveValue> {
                auto eg = energy_and_gradient(u, params);
                if (eg.phi <= -1e12) {
                    throw numerical_error("global_minimize: energy diverged below -1e12");
                }
                return ObjectiveValue{eg.phi, std::move(eg.residual)};
            };
            const auto polished = descend(free_obj, plus.u.scaled(tp), false, opt.descent);
            out.iterations += polished.iterations;
            out.level = polished.value;
            out.minimizer = polished.u;
            if (opt.polish) {
                out.minimizer = newton_polish(out.minimizer, params).u;
                out.level = energy(out.minimizer, params);
            }
            out.t_projection = tp;
            out.converged = polished.converged || plus.converged;
        }
    }
    detail::finish_result(out, params, opt);
    if (!out.minimizer.is_zero()) {
        out.converged = out.converged && out.dpsi_residual <= std::sqrt(opt.dpsi_tol);
    }
    return g;
}

} // namespace kirchhoff
