#pragma once

// Sufficient conditions for a second (N^-) solution: p > p_0(a, b), or
// lambda > lambda_tilde(a, b, p), both read off c^- against the lower
// bound (p-2)^2 a^2 / (4 p (4-p) b).

#include "kirchhoff/nehari.hpp"
#include "kirchhoff/roots.hpp"

#include <cmath>
#include <optional>

namespace kirchhoff {

struct GateOptions {
    bool lambda_branch = true;
    /// Relative width at which the lambda bisection stops.
    double lambda_rtol = 1e-3;
    int max_doublings = 40;
    SolverOptions solver;
};

struct GateResult {
    /// c^-(a, b, 0); absent when N^- is empty at lambda = 0 along the start.
    std::optional<double> c_minus_0;
    double c0_level = 0.0;
    /// (p-2)^2 a^2 / (4 p (4-p) b) at params.p.
    double sigma = 0.0;
    std::optional<double> p0_estimate;
    std::optional<double> lambda_tilde_estimate;
    /// c^-(a, b, 0) >= c^0 level, which contradicts the strict upper estimate.
    bool inconsistent = false;
    bool exists_hint = false;
};

inline GateResult second_solution_gate(const ProblemParams& params, const DiscreteFunction& start,
                                       const GateOptions& opt = {}) {
    params.validate();
    if (!(params.b > 0.0)) {
        throw std::invalid_argument("second_solution_gate requires b > 0");
    }
    GateResult out;
    out.c0_level = c0_level(params.N, params.a, params.b);
    out.sigma = sigma_lower_bound(params.a, params.b, params.p);
    const double q = params.q();

    auto c_minus = [&](double lambda) -> std::optional<double> {
        try {
            return nehari_minus_minimize(params.with_lambda(lambda), start, opt.solver).level;
        } catch (const nehari_empty_error&) {
            return std::nullopt;
        }
    };

    out.c_minus_0 = c_minus(0.0);
    if (out.c_minus_0) {
        const double c = *out.c_minus_0;
        out.inconsistent = c >= out.c0_level;
        if (!out.inconsistent) {
            // sigma(p) increases from 0 at p = 2 to the c^0 level at p = 2*.
            out.p0_estimate = roots::bisect_predicate(
                [&](double p) { return sigma_lower_bound(params.a, params.b, p) > c; }, 2.0, q, 1e-12);
            out.exists_hint = params.p > *out.p0_estimate;
        }
    }

    if (opt.lambda_branch && !out.exists_hint) {
        auto below = [&](double lambda) {
            const auto c = c_minus(lambda);
            return c && *c < out.sigma;
        };
        double lo = 0.0;
        double hi = 1.0;
        int k = 0;
        while (!below(hi) && k < opt.max_doublings) {
            lo = hi;
            hi *= 2.0;
            ++k;
        }
        if (k < opt.max_doublings) {
            while (hi - lo > opt.lambda_rtol * hi) {
                const double mid = 0.5 * (lo + hi);
                (below(mid) ? hi : lo) = mid;
            }
            out.lambda_tilde_estimate = hi;
            out.exists_hint = params.lambda > hi;
        }
    }
    return out;
}

} // namespace kirchhoff
