#pragma once

// Best-found upper bounds for lambda_0^* = inf lambda_0(u) and
// lambda^* = inf lambda(u) over directions on the mesh.

#include "kirchhoff/descent.hpp"
#include "kirchhoff/fiber.hpp"
#include "kirchhoff/starts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace kirchhoff {

enum class ExtremalKind { Lambda0, Lambda };

struct ExtremalStartResult {
    std::string label;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct ExtremalResult {
    ExtremalKind kind = ExtremalKind::Lambda0;
    /// Smallest value found; an upper bound for the infimum over the mesh space.
    double upper = std::numeric_limits<double>::infinity();
    /// Unit-norm direction attaining `upper`.
    DiscreteFunction argmin;
    /// Fiber location of the zero-energy minimum (Lambda0) or inflection (Lambda).
    double t = 0.0;
    bool positive = false;
    bool converged = false;
    std::size_t best_start = 0;
    std::vector<ExtremalStartResult> starts;
};

namespace detail {

inline std::optional<ObjectiveValue> extremal_objective(const DiscreteFunction& u, const ProblemParams& pr,
                                                        ExtremalKind kind) {
    auto pi = power_integrals(u, pr.p, true);
    const auto& fv = pi.values;
    if (!(fv.A > 0.0) || !(fv.C > 0.0) || !(fv.P > 0.0)) {
        return std::nullopt;
    }
    const FiberInput in{fv.A, fv.C, fv.P, pr};
    const auto x = kind == ExtremalKind::Lambda0 ? lambda0_of_u(in, false) : lambda_of_u(in, false);
    if (!std::isfinite(x.value)) {
        return std::nullopt;
    }
    const auto s = kind == ExtremalKind::Lambda0 ? lambda0_sensitivity(in, x) : lambda_sensitivity(in, x);
    const double q = pr.q();
    auto g = stiffness_apply(u.mesh(), u.values());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = 2.0 * s.dA * g[i] + q * s.dC * pi.load_q[i] + pr.p * s.dP * pi.load_p[i];
    }
    return ObjectiveValue{x.value, std::move(g)};
}

// Largest term of the eliminated expression for lambda at the start direction.
inline double value_scale(const DiscreteFunction& u, const ProblemParams& pr, ExtremalKind kind) {
    const auto fv = functionals(u, pr);
    if (!(fv.P > 0.0) || !(fv.C > 0.0)) {
        return 0.0;
    }
    const FiberInput in{fv.A, fv.C, fv.P, pr};
    const auto x = kind == ExtremalKind::Lambda0 ? lambda0_of_u(in, false) : lambda_of_u(in, false);
    const double lead = pr.a * fv.A * std::pow(x.t, 2.0 - pr.p) / fv.P;
    return kind == ExtremalKind::Lambda0 ? 0.5 * pr.p * lead : lead;
}

inline ExtremalResult extremal_search(const ProblemParams& params, const std::vector<StartDirection>& starts,
                                      ExtremalKind kind, const DescentOptions& opt) {
    params.validate();
    if (!(params.b > 0.0)) {
        throw std::invalid_argument("extremal parameters require b > 0");
    }
    if (starts.empty()) {
        throw std::invalid_argument("extremal search needs at least one start");
    }
    const ProblemParams pr = params.with_lambda(0.0);
    ExtremalResult out;
    out.kind = kind;
    int best_iters = std::numeric_limits<int>::max();
    auto obj = [&](const DiscreteFunction& u) { return extremal_objective(u, pr, kind); };
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (starts[i].u.mesh().N() != pr.N) {
            throw std::invalid_argument("extremal search: start mesh dimension differs from params.N");
        }
        DescentOptions o = opt;
        o.scale_floor = std::max(o.scale_floor, value_scale(starts[i].u, pr, kind));
        const auto res = descend(obj, starts[i].u, true, o);
        out.starts.push_back({starts[i].label, res.value, res.iterations, res.converged});
        if (res.value < out.upper || (res.value == out.upper && res.iterations < best_iters)) {
            out.upper = res.value;
            out.argmin = res.u;
            out.best_start = i;
            out.converged = res.converged;
            best_iters = res.iterations;
        }
    }
    const auto fv = functionals(out.argmin, pr);
    const FiberInput in{fv.A, fv.C, fv.P, pr};
    const auto x = kind == ExtremalKind::Lambda0 ? lambda0_of_u(in, false) : lambda_of_u(in, false);
    out.t = x.t;
    out.positive = out.upper > 0.0;
    return out;
}

} // namespace detail

/// Multi-start descent of u -> lambda_0(u) on the unit sphere. The lambda
/// field of `params` is ignored.
inline ExtremalResult extremal_lambda0(const ProblemParams& params, const MeshPtr& mesh, int n_starts = 8,
                                       std::uint64_t seed = 0, const std::vector<StartDirection>& extra_starts = {},
                                       const DescentOptions& opt = {}) {
    auto starts = default_starts(mesh, n_starts, seed);
    starts.insert(starts.end(), extra_starts.begin(), extra_starts.end());
    return detail::extremal_search(params, starts, ExtremalKind::Lambda0, opt);
}

/// Multi-start descent of u -> lambda(u) on the unit sphere.
inline ExtremalResult extremal_lambda(const ProblemParams& params, const MeshPtr& mesh, int n_starts = 8,
                                      std::uint64_t seed = 0, const std::vector<StartDirection>& extra_starts = {},
                                      const DescentOptions& opt = {}) {
    auto starts = default_starts(mesh, n_starts, seed);
    starts.insert(starts.end(), extra_starts.begin(), extra_starts.end());
    return detail::extremal_search(params, starts, ExtremalKind::Lambda, opt);
}

/// Searches over the given starts only.
inline ExtremalResult extremal_from(const ProblemParams& params, ExtremalKind kind,
                                    const std::vector<StartDirection>& starts, const DescentOptions& opt = {}) {
    return detail::extremal_search(params, starts, kind, opt);
}

} // namespace kirchhoff
