#pragma once

// Solution checks: PDE residual, Pohozaev defect, and Newton refinement of
// a discrete critical point.

#include "kirchhoff/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kirchhoff {

struct VerificationReport {
    /// H^1 norm of the energy gradient.
    double pde_residual = 0.0;
    /// Relative defect of the Pohozaev identity for the frozen-coefficient equation.
    double pohozaev_defect = 0.0;
    double energy = 0.0;
    /// Outward radial derivative at r = 1 recovered from the boundary flux.
    double boundary_slope = 0.0;
};

/// Checks u against -(a + b|u|^2) Lap u = |u|^{2*-2}u + lambda |u|^{p-2}u on
/// the unit ball. With kappa = a + bA the Pohozaev identity reads
/// kappa (N-2)/2 A + kappa/2 |S^{N-1}| u'(1)^2 = N (C/2* + lambda P/p).
inline VerificationReport verify_solution(const DiscreteFunction& u, const ProblemParams& params) {
    params.validate();
    VerificationReport rep;
    if (u.is_zero()) {
        return rep;
    }
    const auto eg = energy_and_gradient(u, params);
    const auto& mesh = u.mesh();
    const auto& fv = eg.values;
    const double kappa = params.a + params.b * fv.A;
    const double area = mesh.N() * mesh.omega();
    rep.energy = eg.phi;
    rep.pde_residual = eg.grad_norm;
    rep.boundary_slope = eg.residual.back() / (kappa * area);
    const double t1 = kappa * 0.5 * (mesh.N() - 2) * fv.A;
    const double t2 = kappa * 0.5 * area * rep.boundary_slope * rep.boundary_slope;
    const double t3 = mesh.N() * (fv.C / params.q() + params.lambda * fv.P / params.p);
    const double scale = std::max({t1, t2, t3});
    rep.pohozaev_defect = scale > 0.0 ? std::abs(t1 + t2 - t3) / scale : 0.0;
    return rep;
}

struct PolishResult {
    DiscreteFunction u;
    double initial_residual = 0.0;
    double residual = 0.0;
    int steps = 0;
};

/// Newton iteration on Phi'(u) = 0 starting near a critical point. The
/// Jacobian kappa K - W + 2b (Ku)(Ku)^T is tridiagonal plus rank one and is
/// solved by Sherman-Morrison. A step is kept only if it lowers the residual.
inline PolishResult newton_polish(const DiscreteFunction& u0, const ProblemParams& params, int max_steps = 8) {
    params.validate();
    PolishResult out{u0, 0.0, 0.0, 0};
    if (u0.is_zero()) {
        return out;
    }
    const auto& mesh = u0.mesh();
    const int M = mesh.M();
    const double q = params.q();
    const double p = params.p;
    const auto& kc = mesh.stiffness();
    const auto& gw = mesh.gauss_weights();
    const auto& gl = mesh.gauss_left();

    auto eg = energy_and_gradient(out.u, params);
    out.initial_residual = eg.grad_norm;
    out.residual = eg.grad_norm;
    for (int step = 0; step < max_steps; ++step) {
        const double kappa = params.a + params.b * eg.values.A;
        std::vector<double> diag(M, 0.0), lower(M, 0.0), upper(M, 0.0);
        for (int e = 0; e < M; ++e) {
            double w00 = 0.0, w01 = 0.0, w11 = 0.0;
            for (int k = 0; k < RadialMesh::gauss_points; ++k) {
                const std::size_t g = static_cast<std::size_t>(e) * RadialMesh::gauss_points + k;
                const double l = gl[g];
                const double v = std::abs(out.u[e] * l + out.u[e + 1] * (1.0 - l));
                if (v == 0.0) {
                    continue;
                }
                const double fprime = (q - 1.0) * std::pow(v, q - 2.0) + params.lambda * (p - 1.0) * std::pow(v, p - 2.0);
                w00 += gw[g] * fprime * l * l;
                w01 += gw[g] * fprime * l * (1.0 - l);
                w11 += gw[g] * fprime * (1.0 - l) * (1.0 - l);
            }
            diag[e] += kappa * kc[e] - w00;
            if (e + 1 < M) {
                diag[e + 1] += kappa * kc[e] - w11;
                upper[e] = -kappa * kc[e] - w01;
                lower[e + 1] = -kappa * kc[e] - w01;
            }
        }
        auto thomas = [&](const std::vector<double>& rhs) {
            std::vector<double> c(M), x(M);
            double pc = 0.0, px = 0.0;
            for (int i = 0; i < M; ++i) {
                const double den = diag[i] - lower[i] * pc;
                c[i] = upper[i] / den;
                x[i] = (rhs[i] - lower[i] * px) / den;
                pc = c[i];
                px = x[i];
            }
            for (int i = M - 2; i >= 0; --i) {
                x[i] -= c[i] * x[i + 1];
            }
            return x;
        };
        const auto ku = stiffness_apply(mesh, out.u.values());
        std::vector<double> rhs(eg.residual.begin(), eg.residual.begin() + M);
        std::vector<double> v(ku.begin(), ku.begin() + M);
        const auto y = thomas(rhs);
        const auto z = thomas(v);
        double vy = 0.0, vz = 0.0;
        for (int i = 0; i < M; ++i) {
            vy += v[i] * y[i];
            vz += v[i] * z[i];
        }
        const double coef = 2.0 * params.b / (1.0 + 2.0 * params.b * vz);
        std::vector<double> delta(M + 1, 0.0);
        bool finite = std::isfinite(coef);
        for (int i = 0; i < M && finite; ++i) {
            delta[i] = -(y[i] - coef * vy * z[i]);
            finite = std::isfinite(delta[i]);
        }
        if (!finite) {
            break;
        }
        auto trial = out.u.axpy(1.0, DiscreteFunction(out.u.mesh_ptr(), std::move(delta)));
        auto teg = energy_and_gradient(trial, params);
        if (!(teg.grad_norm < out.residual)) {
            break;
        }
        out.u = std::move(trial);
        eg = std::move(teg);
        out.residual = eg.grad_norm;
        ++out.steps;
    }
    return out;
}

} // namespace kirchhoff
