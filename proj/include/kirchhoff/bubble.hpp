#pragma once

// Truncated Aubin-Talenti profiles and the mesh-level Sobolev constant.

#include "kirchhoff/descent.hpp"
#include "kirchhoff/discrete.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kirchhoff {

/// Quintic ramp: 1 on [0, R/2], 0 on [R, 1], C^2 in between.
inline double quintic_cutoff(double r, double R) {
    const double h = 0.5 * R;
    if (r <= h) {
        return 1.0;
    }
    if (r >= R) {
        return 0.0;
    }
    const double s = (r - h) / h;
    return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

struct Bubble {
    DiscreteFunction u;
    double eps = 0.0;
    /// First mesh spacing exceeds sqrt(eps): the peak is not resolved.
    bool under_resolved = false;
};

/// phi(r) / (eps + r^2)^{(N-2)/2}, normalized to |u| = 1 on the mesh.
inline Bubble bubble(const MeshPtr& mesh, double eps, double cutoff_radius = 0.99) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw std::invalid_argument("bubble: eps must lie in (0, 1]");
    }
    if (!(cutoff_radius > 0.0 && cutoff_radius < 1.0)) {
        throw std::invalid_argument("bubble: cutoff_radius must lie in (0, 1)");
    }
    const double expo = 0.5 * (mesh->N() - 2);
    auto u = DiscreteFunction::sample(
        mesh, [&](double r) { return quintic_cutoff(r, cutoff_radius) / std::pow(eps + r * r, expo); });
    const double n = h1_norm(u);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw numerical_error("bubble: profile vanishes on this mesh");
    }
    return {u.scaled(1.0 / n), eps, mesh->spacing(0) > std::sqrt(eps)};
}

/// A / C^{2/2*}
inline double rayleigh_quotient(const DiscreteFunction& u) {
    const auto fv = functionals(u, 3.0);
    const double q = critical_exponent(u.mesh().N());
    return fv.A / std::pow(fv.C, 2.0 / q);
}

/// Rayleigh quotient and its Euclidean gradient, for use with `descend`.
inline std::optional<ObjectiveValue> rayleigh_objective(const DiscreteFunction& u) {
    const auto& mesh = u.mesh();
    const double q = critical_exponent(mesh.N());
    auto pi = power_integrals(u, 3.0, true);
    const double A = pi.values.A;
    const double C = pi.values.C;
    if (!(C > 0.0)) {
        return std::nullopt;
    }
    const double cq = std::pow(C, -2.0 / q);
    auto g = stiffness_apply(mesh, u.values());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = 2.0 * g[i] * cq - 2.0 * A * cq / C * pi.load_q[i];
    }
    return ObjectiveValue{A * cq, std::move(g)};
}

/// Best bubble over a log-spaced eps scan.
inline Bubble best_bubble(const MeshPtr& mesh, double eps_min = 1e-10, double eps_max = 1.0, int count = 61) {
    Bubble best{DiscreteFunction(mesh), 0.0, false};
    double best_r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        const double eps = eps_min * std::pow(eps_max / eps_min, static_cast<double>(i) / (count - 1));
        auto b = bubble(mesh, eps);
        const double r = rayleigh_quotient(b.u);
        if (r < best_r) {
            best_r = r;
            best = std::move(b);
        }
    }
    return best;
}

struct SobolevEstimate {
    /// Minimum of A / C^{2/2*} over grid functions.
    double S_h = 0.0;
    /// Minimizer normalized to |u| = 1.
    DiscreteFunction minimizer;
    double start_eps = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Mesh-level Sobolev constant: bubble scan, then descent on the unit sphere.
/// A stalled descent returns converged = false with the best value found.
inline SobolevEstimate discrete_sobolev_constant(const MeshPtr& mesh, const DescentOptions& opt = {}) {
    auto start = best_bubble(mesh);
    auto res = descend(rayleigh_objective, start.u, true, opt);
    return {res.value, normalize_h1(res.u), start.eps, res.iterations, res.converged};
}

} // namespace kirchhoff
