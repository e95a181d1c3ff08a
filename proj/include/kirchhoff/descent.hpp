#pragma once

// Nonlinear conjugate gradients (Polak-Ribiere+, Armijo backtracking) in the
// discrete H^1 metric, either free or on the unit sphere |u| = 1.

#include "kirchhoff/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace kirchhoff {

struct DescentOptions {
    int max_iter = 4000;
    /// Relative change of the objective accepted as stationary.
    double ftol = 1e-10;
    /// Relative H^1 norm of the (tangential) gradient accepted as stationary.
    double gtol = 1e-8;
    double armijo = 1e-4;
    /// Initial step length measured in the H^1 norm of the update.
    double initial_step = 0.1;
    double max_step = 0.5;
    /// Gradient level accepted once the objective stops changing in floating
    /// point; below it the line search cannot resolve further decrease.
    double stall_gtol = 1e-6;
    int stall_iterations = 5;
    /// Lower bound for the magnitude that relative tolerances refer to; set it
    /// when the objective is a small difference of large terms.
    double scale_floor = 0.0;
};

/// Objective value and its Euclidean gradient dF/du_i (size M + 1).
struct ObjectiveValue {
    double value = 0.0;
    std::vector<double> gradient;
};

struct DescentResult {
    DiscreteFunction u;
    double value = 0.0;
    /// H^1 norm of the (projected) Riesz gradient at u.
    double grad_norm = 0.0;
    double last_change = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    /// Stopped because the objective no longer changes in floating point.
    bool stalled = false;
};

inline DiscreteFunction normalize_h1(const DiscreteFunction& u) {
    const double n = h1_norm(u);
    if (!(n > 0.0)) {
        throw std::invalid_argument("normalize_h1: zero function");
    }
    return u.scaled(1.0 / n);
}

namespace detail {

struct DescentPoint {
    DiscreteFunction u;
    double value;
    DiscreteFunction g;  // Riesz gradient, tangential on the sphere
    double gnorm;
};

template <class Objective>
std::optional<DescentPoint> evaluate_point(Objective& f, const DiscreteFunction& u, bool sphere) {
    std::optional<ObjectiveValue> ov = f(u);
    if (!ov || !std::isfinite(ov->value)) {
        return std::nullopt;
    }
    auto& e = ov->gradient;
    e.back() = 0.0;
    auto g = solve_stiffness(u.mesh(), e);
    double eg = 0.0;
    double eu = 0.0;
    for (int i = 0; i < u.mesh().M(); ++i) {
        eg += e[i] * g[i];
        eu += e[i] * u[i];
    }
    DiscreteFunction gf(u.mesh_ptr(), std::move(g));
    double n2 = eg;
    if (sphere) {
        // <g, u>_{H^1} = e . u and |u|_{H^1} = 1
        gf = gf.axpy(-eu, u);
        n2 = eg - eu * eu;
    }
    if (!std::isfinite(n2)) {
        return std::nullopt;
    }
    return DescentPoint{u, ov->value, std::move(gf), std::sqrt(std::max(0.0, n2))};
}

} // namespace detail

/// Minimizes `f` from `start`. `f(u)` returns std::nullopt where the
/// objective is undefined; such trial points are treated as failed steps.
/// On the sphere, `start` is normalized first.
template <class Objective>
DescentResult descend(Objective&& f, const DiscreteFunction& start, bool sphere, const DescentOptions& opt = {}) {
    DiscreteFunction u0 = sphere ? normalize_h1(start) : start;
    DescentResult res{u0, 0.0, 0.0, 0.0, 0, 0, false};
    auto cur = detail::evaluate_point(f, u0, sphere);
    ++res.evaluations;
    if (!cur) {
        throw numerical_error("descent: objective undefined at the starting point");
    }
    auto scale = [&opt](double v) { return std::max({std::abs(v), opt.scale_floor, 1e-300}); };
    DiscreteFunction d = cur->g.scaled(-1.0);
    double step = opt.initial_step / std::max(cur->gnorm, 1e-300);
    double change = std::numeric_limits<double>::infinity();
    int flat = 0;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        if (cur->gnorm <= opt.gtol * scale(cur->value) && std::abs(change) <= opt.ftol * scale(cur->value)) {
            res.converged = true;
            break;
        }
        double slope = h1_inner(cur->g, d);
        if (!(slope < 0.0)) {
            d = cur->g.scaled(-1.0);
            slope = -cur->gnorm * cur->gnorm;
        }
        const double dnorm = h1_norm(d);
        double alpha = std::min(step, opt.max_step / dnorm);
        std::optional<detail::DescentPoint> next;
        for (int bt = 0; bt < 60; ++bt) {
            DiscreteFunction trial = cur->u.axpy(alpha, d);
            if (sphere) {
                const double n = h1_norm(trial);
                if (!(n > 0.0)) {
                    alpha *= 0.5;
                    continue;
                }
                trial = trial.scaled(1.0 / n);
            }
            auto cand = detail::evaluate_point(f, trial, sphere);
            ++res.evaluations;
            if (cand && cand->value <= cur->value + opt.armijo * alpha * slope) {
                next = std::move(cand);
                break;
            }
            alpha *= 0.5;
        }
        if (!next) {
            // no decrease representable along d; retry once along -g
            if (h1_norm(d.axpy(1.0, cur->g)) > 0.0) {
                d = cur->g.scaled(-1.0);
                step = opt.initial_step / std::max(cur->gnorm, 1e-300);
                change = 0.0;
                continue;
            }
            res.stalled = true;
            break;
        }
        change = next->value - cur->value;
        flat = std::abs(change) <= 4.0 * std::numeric_limits<double>::epsilon() * scale(cur->value) ? flat + 1 : 0;
        if (flat >= opt.stall_iterations) {
            cur = std::move(next);
            res.stalled = true;
            ++it;
            break;
        }
        step = std::min(4.0 * alpha, opt.max_step / std::max(dnorm, 1e-300));

        // Polak-Ribiere+ with the previous direction projected onto the new tangent space
        const double gg_old = cur->gnorm * cur->gnorm;
        const double beta = gg_old > 0.0
                                ? std::max(0.0, (next->gnorm * next->gnorm - h1_inner(next->g, cur->g)) / gg_old)
                                : 0.0;
        DiscreteFunction dn = next->g.scaled(-1.0);
        if (beta > 0.0 && it % 50 != 49) {
            DiscreteFunction dprev = d;
            if (sphere) {
                dprev = dprev.axpy(-h1_inner(dprev, next->u), next->u);
            }
            dn = dn.axpy(beta, dprev);
        }
        d = std::move(dn);
        cur = std::move(next);
    }
    res.u = cur->u;
    res.value = cur->value;
    res.grad_norm = cur->gnorm;
    res.last_change = change;
    res.iterations = it;
    if (!res.converged) {
        const double gt = res.stalled ? std::max(opt.gtol, opt.stall_gtol) : opt.gtol;
        res.converged = cur->gnorm <= gt * scale(cur->value) && std::abs(change) <= opt.ftol * scale(cur->value);
    }
    return res;
}

} // namespace kirchhoff
