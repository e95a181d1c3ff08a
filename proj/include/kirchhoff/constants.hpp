#pragma once

#include "kirchhoff/params.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kirchhoff {

namespace detail {

// Lanczos approximation (g = 7, n = 9), ~15 significant digits for x > 0.5.
inline double lanczos_gamma(double x) {
    static constexpr std::array<double, 9> coeff = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    }
    x -= 1.0;
    double acc = coeff[0];
    const double t = x + 7.5;
    for (std::size_t i = 1; i < coeff.size(); ++i) {
        acc += coeff[i] / (x + static_cast<double>(i));
    }
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

inline double gamma_fn(double x) {
    const double g = std::tgamma(x);
    return std::isfinite(g) && g > 0.0 ? g : lanczos_gamma(x);
}

} // namespace detail

/// Volume of the unit ball in R^N.
inline double unit_ball_volume(int N) {
    return std::pow(std::numbers::pi, 0.5 * N) / detail::gamma_fn(0.5 * N + 1.0);
}

struct CriticalConstants {
    double C1 = 0.0;
    double C2 = 0.0;
};

/// C1, C2 evaluated against an arbitrary embedding constant S. The discrete
/// side passes the mesh-level constant here so that all threshold tests are
/// consistent with the discrete Sobolev inequality.
inline CriticalConstants critical_constants(int N, double S) {
    if (N < 5) {
        throw std::invalid_argument("critical constants need N >= 5");
    }
    if (!(S > 0.0)) {
        throw std::invalid_argument("embedding constant must be positive");
    }
    const double n4 = std::pow(N - 4.0, 0.5 * (N - 4));
    const double sN2 = std::pow(S, 0.5 * N);
    CriticalConstants c;
    c.C1 = 4.0 * n4 / (std::pow(static_cast<double>(N), 0.5 * (N - 2)) * sN2);
    c.C2 = 2.0 * n4 / (std::pow(N - 2.0, 0.5 * (N - 2)) * sN2);
    return c;
}

/// S^{N/2} C1(N) and S^{N/2} C2(N); independent of S.
inline double scaled_C1(int N) {
    return 4.0 * std::pow(N - 4.0, 0.5 * (N - 4)) / std::pow(static_cast<double>(N), 0.5 * (N - 2));
}
inline double scaled_C2(int N) {
    return 2.0 * std::pow(N - 4.0, 0.5 * (N - 4)) / std::pow(N - 2.0, 0.5 * (N - 2));
}

struct Constants {
    int N = 5;
    double S_N = 0.0;
    double omega_N = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
};

/// Closed-form constants S_N = N(N-2)/4 * omega_N^{2/N}, C1(N), C2(N).
inline Constants sobolev_constant(int N) {
    if (N <= 4) {
        throw std::invalid_argument("sobolev_constant requires N > 4, got " + std::to_string(N));
    }
    Constants c;
    c.N = N;
    c.omega_N = unit_ball_volume(N);
    c.S_N = 0.25 * N * (N - 2.0) * std::pow(c.omega_N, 2.0 / N);
    const auto cc = critical_constants(N, c.S_N);
    c.C1 = cc.C1;
    c.C2 = cc.C2;
    return c;
}

/// Talenti's sharp constant pi N (N-2) (Gamma(N/2)/Gamma(N))^{2/N}. This is
/// the value the discrete infimum converges to under mesh refinement; it
/// differs from S_N above, which uses the ball volume instead of the area of
/// the N-sphere.
inline double talenti_constant(int N) {
    return std::numbers::pi * N * (N - 2.0) *
           std::pow(detail::gamma_fn(0.5 * N) / detail::gamma_fn(static_cast<double>(N)), 2.0 / N);
}

} // namespace kirchhoff
