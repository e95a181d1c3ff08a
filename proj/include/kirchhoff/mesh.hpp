#pragma once

// Radial P1 mesh of the unit ball in R^N.

#include "kirchhoff/constants.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kirchhoff {

enum class Grading {
    Uniform,
    /// r = 3s^2 - 2s^3: nodes cluster at the origin and at the boundary.
    Graded,
};

inline std::string_view to_string(Grading g) {
    return g == Grading::Uniform ? "uniform" : "graded";
}

inline Grading grading_from_string(std::string_view s) {
    if (s == "uniform") {
        return Grading::Uniform;
    }
    if (s == "graded") {
        return Grading::Graded;
    }
    throw std::invalid_argument("unknown grading '" + std::string(s) + "' (expected uniform or graded)");
}

namespace detail {

inline constexpr std::array<double, 8> gauss_x = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> gauss_w = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

} // namespace detail

/// Nodes 0 = r_0 < ... < r_M = 1 with u(r_M) = 0. Integrals carry the radial
/// measure N omega_N r^{N-1} dr, so they equal integrals over the ball.
class RadialMesh {
public:
    static constexpr int gauss_points = 8;

    RadialMesh(int N, int M, Grading grading) : N_(N), M_(M), grading_(grading) {
        if (N < 5) {
            throw std::invalid_argument("make_mesh: N must be at least 5");
        }
        if (M < 64) {
            throw std::invalid_argument("make_mesh: M must be at least 64");
        }
        omega_ = unit_ball_volume(N);
        const double area = N * omega_;
        r_.resize(M + 1);
        for (int i = 0; i <= M; ++i) {
            const double s = static_cast<double>(i) / M;
            r_[i] = grading == Grading::Uniform ? s : s * s * (3.0 - 2.0 * s);
        }
        r_[M] = 1.0;

        stiff_.resize(M);
        gp_w_.resize(static_cast<std::size_t>(M) * gauss_points);
        gp_left_.resize(static_cast<std::size_t>(M) * gauss_points);
        weights_.assign(M + 1, 0.0);
        for (int e = 0; e < M; ++e) {
            const double r0 = r_[e];
            const double r1 = r_[e + 1];
            const double h = r1 - r0;
            stiff_[e] = area * (std::pow(r1, N) - std::pow(r0, N)) / (N * h * h);
            for (int k = 0; k < gauss_points; ++k) {
                const double x = r0 + 0.5 * h * (1.0 + detail::gauss_x[k]);
                const double w = 0.5 * h * detail::gauss_w[k] * area * std::pow(x, N - 1);
                const double left = (r1 - x) / h;
                gp_w_[e * gauss_points + k] = w;
                gp_left_[e * gauss_points + k] = left;
                weights_[e] += w * left;
                weights_[e + 1] += w * (1.0 - left);
            }
        }
    }

    int N() const { return N_; }
    /// Number of cells; there are M + 1 nodes.
    int M() const { return M_; }
    Grading grading() const { return grading_; }
    double omega() const { return omega_; }
    const std::vector<double>& nodes() const { return r_; }
    /// Lumped weights int phi_i over the ball. Positive, summing to omega_N.
    const std::vector<double>& weights() const { return weights_; }
    /// Per-cell stiffness: |grad u|^2 integrated over cell e is stiffness[e] (u_{e+1}-u_e)^2.
    const std::vector<double>& stiffness() const { return stiff_; }
    const std::vector<double>& gauss_weights() const { return gp_w_; }
    const std::vector<double>& gauss_left() const { return gp_left_; }

    double spacing(int e) const { return r_[e + 1] - r_[e]; }

    /// Sum of w_i f(r_i), a nodal (trapezoid-type) rule.
    template <class F>
    double integrate_nodal(F&& f) const {
        double s = 0.0;
        for (int i = 0; i <= M_; ++i) {
            s += weights_[i] * f(r_[i]);
        }
        return s;
    }

private:
    int N_;
    int M_;
    Grading grading_;
    double omega_ = 0.0;
    std::vector<double> r_;
    std::vector<double> weights_;
    std::vector<double> stiff_;
    std::vector<double> gp_w_;
    std::vector<double> gp_left_;
};

using MeshPtr = std::shared_ptr<const RadialMesh>;

inline MeshPtr make_mesh(int N, int M, Grading grading = Grading::Graded) {
    return std::make_shared<const RadialMesh>(N, M, grading);
}

} // namespace kirchhoff
