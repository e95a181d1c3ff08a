#pragma once

// Grid functions, integral functionals and the energy gradient. Functions
// are continuous piecewise linear on the mesh; the power integrals are
// evaluated on the interpolant with 8-point Gauss quadrature per cell.

#include "kirchhoff/mesh.hpp"
#include "kirchhoff/params.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kirchhoff {

/// Radial grid function with u(1) = 0.
class DiscreteFunction {
public:
    /// Empty placeholder without a mesh; assign before use.
    DiscreteFunction() = default;

    explicit DiscreteFunction(MeshPtr mesh) : mesh_(std::move(mesh)) {
        if (!mesh_) {
            throw std::invalid_argument("DiscreteFunction: null mesh");
        }
        values_.assign(mesh_->M() + 1, 0.0);
    }

    /// The boundary entry is overwritten with 0.
    DiscreteFunction(MeshPtr mesh, std::vector<double> values) : mesh_(std::move(mesh)), values_(std::move(values)) {
        if (!mesh_) {
            throw std::invalid_argument("DiscreteFunction: null mesh");
        }
        if (values_.size() != static_cast<std::size_t>(mesh_->M() + 1)) {
            throw std::invalid_argument("DiscreteFunction: expected " + std::to_string(mesh_->M() + 1) +
                                        " values, got " + std::to_string(values_.size()));
        }
        values_.back() = 0.0;
    }

    template <class F>
    static DiscreteFunction sample(MeshPtr mesh, F&& f) {
        std::vector<double> v;
        v.reserve(mesh->M() + 1);
        for (double r : mesh->nodes()) {
            v.push_back(f(r));
        }
        return DiscreteFunction(std::move(mesh), std::move(v));
    }

    const RadialMesh& mesh() const {
        if (!mesh_) {
            throw std::logic_error("DiscreteFunction: empty function has no mesh");
        }
        return *mesh_;
    }
    bool empty() const { return !mesh_; }
    const MeshPtr& mesh_ptr() const { return mesh_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    DiscreteFunction scaled(double mu) const {
        DiscreteFunction out = *this;
        for (double& x : out.values_) {
            x *= mu;
        }
        return out;
    }

    /// this + alpha * other
    DiscreteFunction axpy(double alpha, const DiscreteFunction& other) const {
        require_same_mesh(other);
        DiscreteFunction out = *this;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            out.values_[i] += alpha * other.values_[i];
        }
        out.values_.back() = 0.0;
        return out;
    }

    bool is_zero() const {
        for (double x : values_) {
            if (x != 0.0) {
                return false;
            }
        }
        return true;
    }

    void require_same_mesh(const DiscreteFunction& other) const {
        if (mesh_ != other.mesh_ && (mesh_->N() != other.mesh_->N() || mesh_->nodes() != other.mesh_->nodes())) {
            throw std::invalid_argument("DiscreteFunction: mesh mismatch");
        }
    }

private:
    MeshPtr mesh_;
    std::vector<double> values_;
};

/// A = |u|^2 (Dirichlet norm), C = |u|_{2*}^{2*}, P = |u|_p^p, Q2 = |u|_2^2.
struct FunctionalValues {
    double A = 0.0;
    double C = 0.0;
    double P = 0.0;
    double Q2 = 0.0;
};

/// Stiffness matrix times u (all M + 1 rows).
inline std::vector<double> stiffness_apply(const RadialMesh& mesh, std::span<const double> u) {
    const auto& kc = mesh.stiffness();
    std::vector<double> out(u.size(), 0.0);
    for (int e = 0; e < mesh.M(); ++e) {
        const double flux = kc[e] * (u[e + 1] - u[e]);
        out[e] -= flux;
        out[e + 1] += flux;
    }
    return out;
}

inline double h1_inner(const DiscreteFunction& u, const DiscreteFunction& v) {
    u.require_same_mesh(v);
    const auto& kc = u.mesh().stiffness();
    double s = 0.0;
    for (int e = 0; e < u.mesh().M(); ++e) {
        s += kc[e] * (u[e + 1] - u[e]) * (v[e + 1] - v[e]);
    }
    return s;
}

inline double h1_norm(const DiscreteFunction& u) {
    return std::sqrt(h1_inner(u, u));
}

/// Solves K x = rhs on the free nodes 0..M-1 (x_M = 0) by the Thomas algorithm.
inline std::vector<double> solve_stiffness(const RadialMesh& mesh, std::span<const double> rhs) {
    const int M = mesh.M();
    const auto& kc = mesh.stiffness();
    std::vector<double> c(M, 0.0);
    std::vector<double> x(M + 1, 0.0);
    double prev_c = 0.0;
    double prev_x = 0.0;
    for (int i = 0; i < M; ++i) {
        const double diag = (i > 0 ? kc[i - 1] : 0.0) + kc[i];
        const double lower = i > 0 ? -kc[i - 1] : 0.0;
        const double upper = i + 1 < M ? -kc[i] : 0.0;
        const double denom = diag - lower * prev_c;
        if (!(std::abs(denom) > 0.0) || !std::isfinite(denom)) {
            throw numerical_error("solve_stiffness: singular tridiagonal system");
        }
        c[i] = upper / denom;
        x[i] = (rhs[i] - lower * prev_x) / denom;
        prev_c = c[i];
        prev_x = x[i];
    }
    for (int i = M - 2; i >= 0; --i) {
        x[i] -= c[i] * x[i + 1];
    }
    return x;
}

/// Functionals plus the load vectors int |u|^{2*-2}u phi_i and int |u|^{p-2}u phi_i.
struct PowerIntegrals {
    FunctionalValues values;
    std::vector<double> load_q;
    std::vector<double> load_p;
};

inline PowerIntegrals power_integrals(const DiscreteFunction& u, double p, bool with_loads) {
    const auto& mesh = u.mesh();
    const double q = critical_exponent(mesh.N());
    const auto& kc = mesh.stiffness();
    const auto& gw = mesh.gauss_weights();
    const auto& gl = mesh.gauss_left();
    PowerIntegrals out;
    if (with_loads) {
        out.load_q.assign(u.size(), 0.0);
        out.load_p.assign(u.size(), 0.0);
    }
    auto& fv = out.values;
    for (int e = 0; e < mesh.M(); ++e) {
        const double d = u[e + 1] - u[e];
        fv.A += kc[e] * d * d;
        const double ul = u[e];
        const double ur = u[e + 1];
        if (ul == 0.0 && ur == 0.0) {
            continue;
        }
        for (int k = 0; k < RadialMesh::gauss_points; ++k) {
            const std::size_t g = static_cast<std::size_t>(e) * RadialMesh::gauss_points + k;
            const double left = gl[g];
            const double w = gw[g];
            const double v = ul * left + ur * (1.0 - left);
            const double av = std::abs(v);
            if (av == 0.0) {
                continue;
            }
            const double fq = std::pow(av, q - 2.0);
            const double fp = std::pow(av, p - 2.0);
            fv.C += w * fq * av * av;
            fv.P += w * fp * av * av;
            fv.Q2 += w * v * v;
            if (with_loads) {
                out.load_q[e] += w * fq * v * left;
                out.load_q[e + 1] += w * fq * v * (1.0 - left);
                out.load_p[e] += w * fp * v * left;
                out.load_p[e + 1] += w * fp * v * (1.0 - left);
            }
        }
    }
    return out;
}

inline FunctionalValues functionals(const DiscreteFunction& u, double p) {
    return power_integrals(u, p, false).values;
}

inline FunctionalValues functionals(const DiscreteFunction& u, const ProblemParams& params) {
    return functionals(u, params.p);
}

inline double energy_from(const FunctionalValues& fv, const ProblemParams& pr) {
    return 0.5 * pr.a * fv.A + 0.25 * pr.b * fv.A * fv.A - fv.C / pr.q() - pr.lambda * fv.P / pr.p;
}

inline double energy(const DiscreteFunction& u, const ProblemParams& params) {
    return energy_from(functionals(u, params), params);
}

struct EnergyGradient {
    double phi = 0.0;
    FunctionalValues values;
    /// H^1 Riesz representative of the derivative: <grad, v>_{H^1} = Phi'(u) v.
    DiscreteFunction grad;
    /// Derivative against each hat function, including the boundary row M.
    std::vector<double> residual;
    /// |grad|_{H^1}, the dual norm of Phi'(u) on the free nodes.
    double grad_norm = 0.0;
};

inline EnergyGradient energy_and_gradient(const DiscreteFunction& u, const ProblemParams& params) {
    const auto& mesh = u.mesh();
    if (mesh.N() != params.N) {
        throw std::invalid_argument("energy_and_gradient: mesh dimension differs from params.N");
    }
    auto pi = power_integrals(u, params.p, true);
    const auto& fv = pi.values;
    const double kappa = params.a + params.b * fv.A;
    auto res = stiffness_apply(mesh, u.values());
    for (std::size_t i = 0; i < res.size(); ++i) {
        res[i] = kappa * res[i] - pi.load_q[i] - params.lambda * pi.load_p[i];
    }
    auto g = solve_stiffness(mesh, res);
    double dual = 0.0;
    for (int i = 0; i < mesh.M(); ++i) {
        dual += res[i] * g[i];
    }
    return {energy_from(fv, params), fv, DiscreteFunction(u.mesh_ptr(), std::move(g)), std::move(res),
            std::sqrt(std::max(0.0, dual))};
}

} // namespace kirchhoff
