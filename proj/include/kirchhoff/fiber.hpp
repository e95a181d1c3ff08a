#pragma once

// Exact scalar analysis of the fiber maps t -> Phi_lambda(t u). Everything
// here works on the reduced data (|u|^2, |u|_{2*}^{2*}, |u|_p^p); no
// discretization is involved.

#include "kirchhoff/constants.hpp"
#include "kirchhoff/params.hpp"
#include "kirchhoff/roots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace kirchhoff {

inline constexpr double tol_root = 1e-12;
inline constexpr double tol_residual = 1e-10;
inline constexpr double tol_degenerate = 1e-9;

/// Reduced functional data of a direction u: A = |u|^2, C = |u|_{2*}^{2*},
/// P = |u|_p^p.
struct FiberInput {
    double A = 1.0;
    double C = 1.0;
    double P = 0.0;
    ProblemParams params;

    void validate() const {
        params.validate();
        if (!(A > 0.0) || !std::isfinite(A)) {
            throw std::invalid_argument("FiberInput: A must be positive");
        }
        if (!(C > 0.0) || !std::isfinite(C)) {
            throw std::invalid_argument("FiberInput: C must be positive");
        }
        if (!(P >= 0.0) || !std::isfinite(P)) {
            throw std::invalid_argument("FiberInput: P must be non-negative");
        }
    }

    /// Input for the direction mu*u.
    FiberInput scaled(double mu) const {
        FiberInput out = *this;
        out.A *= mu * mu;
        out.C *= std::pow(mu, params.q());
        out.P *= std::pow(mu, params.p);
        return out;
    }
};

/// C <= S^{-2*/2} A^{2*/2}, with a relative slack for rounding.
inline bool sobolev_consistent(const FiberInput& in, double S, double slack = 1e-12) {
    const double q = in.params.q();
    return in.C <= std::pow(S, -0.5 * q) * std::pow(in.A, 0.5 * q) * (1.0 + slack);
}

// --- fiber map and derivatives -------------------------------------------

inline double psi(const FiberInput& in, double t) {
    const auto& pr = in.params;
    const double q = pr.q();
    return 0.5 * pr.a * in.A * t * t + 0.25 * pr.b * in.A * in.A * t * t * t * t -
           in.C * std::pow(t, q) / q - pr.lambda * in.P * std::pow(t, pr.p) / pr.p;
}

inline double dpsi(const FiberInput& in, double t) {
    const auto& pr = in.params;
    const double q = pr.q();
    return pr.a * in.A * t + pr.b * in.A * in.A * t * t * t - in.C * std::pow(t, q - 1.0) -
           pr.lambda * in.P * std::pow(t, pr.p - 1.0);
}

inline double d2psi(const FiberInput& in, double t) {
    const auto& pr = in.params;
    const double q = pr.q();
    return pr.a * in.A + 3.0 * pr.b * in.A * in.A * t * t - (q - 1.0) * in.C * std::pow(t, q - 2.0) -
           pr.lambda * (pr.p - 1.0) * in.P * std::pow(t, pr.p - 2.0);
}

/// Magnitude of the largest term of psi'(t); residuals are reported relative to it.
inline double dpsi_scale(const FiberInput& in, double t) {
    const auto& pr = in.params;
    const double q = pr.q();
    return t * std::max({pr.a * in.A, pr.b * in.A * in.A * t * t, in.C * std::pow(t, q - 2.0),
                         pr.lambda * in.P * std::pow(t, pr.p - 2.0)});
}

// --- classification ------------------------------------------------------

enum class FiberClass {
    Increasing,          // no critical point
    InflectionCritical,  // one degenerate critical point
    TwoCritical,         // local max t- < local min t+
    SingleMax,           // one local max only (b = 0)
};

inline std::string_view to_string(FiberClass c) {
    switch (c) {
    case FiberClass::Increasing: return "Increasing";
    case FiberClass::InflectionCritical: return "InflectionCritical";
    case FiberClass::TwoCritical: return "TwoCritical";
    case FiberClass::SingleMax: return "SingleMax";
    }
    return "?";
}

inline std::optional<FiberClass> fiber_class_from_string(std::string_view s) {
    for (auto c : {FiberClass::Increasing, FiberClass::InflectionCritical, FiberClass::TwoCritical,
                   FiberClass::SingleMax}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    return std::nullopt;
}

struct FiberReport {
    FiberClass cls = FiberClass::Increasing;
    std::optional<double> t_minus;
    std::optional<double> t_plus;
    std::optional<double> t_degenerate;
    std::optional<double> energy_minus;
    std::optional<double> energy_plus;
    /// Maximizer of phi(t) = -bA^2 t^2 + C t^{2*-2} + lambda P t^{p-2}.
    double t_star = 0.0;
    /// (phi(t*) - aA) / max(aA, phi(t*)); positive means two critical points.
    double margin = 0.0;
    /// |psi'| at the reported roots divided by dpsi_scale.
    double residual_minus = 0.0;
    double residual_plus = 0.0;

    bool has_local_max() const { return t_minus.has_value(); }
};

namespace detail {

// d(t) = psi'(t)/t = aA + bA^2 t^2 - C t^{q-2} - lambda P t^{p-2}
inline std::pair<double, double> reduced_dpsi(const FiberInput& in, double t) {
    const auto& pr = in.params;
    const double q = pr.q();
    const double lp = pr.lambda * in.P;
    const double f = pr.a * in.A + pr.b * in.A * in.A * t * t - in.C * std::pow(t, q - 2.0) -
                     lp * std::pow(t, pr.p - 2.0);
    const double df = 2.0 * pr.b * in.A * in.A * t - (q - 2.0) * in.C * std::pow(t, q - 3.0) -
                      lp * (pr.p - 2.0) * std::pow(t, pr.p - 3.0);
    return {f, df};
}

inline double phi_rhs(const FiberInput& in, double t) {
    const auto& pr = in.params;
    return -pr.b * in.A * in.A * t * t + in.C * std::pow(t, pr.q() - 2.0) +
           pr.lambda * in.P * std::pow(t, pr.p - 2.0);
}

inline double residual_at(const FiberInput& in, double t) {
    return std::abs(dpsi(in, t)) / dpsi_scale(in, t);
}

inline double root_of_reduced(const FiberInput& in, double lo, double hi) {
    auto r = roots::safeguarded_newton([&](double t) { return reduced_dpsi(in, t); }, lo, hi, tol_root);
    if (!r.converged) {
        throw numerical_error("classify_fiber: critical point iteration did not converge");
    }
    return r.x;
}

// Shrink from `start` until psi' > 0.
inline double lower_bracket(const FiberInput& in, double start) {
    double t = start;
    for (int i = 0; i < 200; ++i) {
        t *= 0.5;
        if (reduced_dpsi(in, t).first > 0.0) {
            return t;
        }
    }
    throw numerical_error("classify_fiber: no positive slope found near the origin");
}

} // namespace detail

/// Classify the fiber map of a pure-power input and locate its critical points.
inline FiberReport classify_fiber(const FiberInput& in) {
    in.validate();
    const auto& pr = in.params;
    const double q = pr.q();
    const double aA = pr.a * in.A;
    FiberReport rep;

    if (pr.b == 0.0) {
        // phi is increasing from 0 to infinity: exactly one crossing.
        const double guess = std::pow(aA / in.C, 1.0 / (q - 2.0));
        const auto hi = roots::expand_until(
            [&](double t) { return detail::reduced_dpsi(in, t).first < 0.0; }, guess);
        if (!hi) {
            throw numerical_error("classify_fiber: no upper bracket for b = 0 local maximum");
        }
        const double lo = detail::lower_bracket(in, *hi);
        const double tm = detail::root_of_reduced(in, lo, *hi);
        rep.cls = FiberClass::SingleMax;
        rep.t_star = tm;
        rep.margin = 1.0;
        rep.t_minus = tm;
        rep.energy_minus = psi(in, tm);
        rep.residual_minus = detail::residual_at(in, tm);
        return rep;
    }

    // t*: root of phi'(t)/t = -2bA^2 + (q-2)C t^{q-4} + lambda(p-2)P t^{p-4},
    // which is strictly decreasing.
    const double bA2 = pr.b * in.A * in.A;
    const double lp = pr.lambda * in.P;
    auto s = [&](double t) {
        const double f = -2.0 * bA2 + (q - 2.0) * in.C * std::pow(t, q - 4.0) +
                         lp * (pr.p - 2.0) * std::pow(t, pr.p - 4.0);
        const double df = (q - 2.0) * (q - 4.0) * in.C * std::pow(t, q - 5.0) +
                          lp * (pr.p - 2.0) * (pr.p - 4.0) * std::pow(t, pr.p - 5.0);
        return std::pair{f, df};
    };
    const double t_guess = std::pow((q - 2.0) * in.C / (2.0 * bA2), 1.0 / (4.0 - q));
    double t_star = t_guess;
    if (s(t_guess).first > 0.0) {
        const auto hi = roots::expand_until([&](double t) { return s(t).first < 0.0; }, t_guess);
        if (!hi) {
            throw numerical_error("classify_fiber: maximizer of phi not bracketed");
        }
        auto r = roots::safeguarded_newton(s, t_guess, *hi, tol_root);
        if (!r.converged) {
            throw numerical_error("classify_fiber: maximizer iteration did not converge");
        }
        t_star = r.x;
    }
    rep.t_star = t_star;
    const double phi_star = detail::phi_rhs(in, t_star);
    rep.margin = (phi_star - aA) / std::max(aA, phi_star);

    if (std::abs(rep.margin) <= tol_degenerate) {
        rep.cls = FiberClass::InflectionCritical;
        rep.t_degenerate = t_star;
        rep.energy_minus = psi(in, t_star);
        rep.residual_minus = detail::residual_at(in, t_star);
        return rep;
    }
    if (rep.margin < 0.0) {
        rep.cls = FiberClass::Increasing;
        return rep;
    }

    rep.cls = FiberClass::TwoCritical;
    const double lo = detail::lower_bracket(in, t_star);
    const double tm = detail::root_of_reduced(in, lo, t_star);
    const auto hi = roots::expand_until(
        [&](double t) { return detail::reduced_dpsi(in, t).first > 0.0; }, 2.0 * t_star);
    if (!hi) {
        throw numerical_error("classify_fiber: upper bracket for t+ not found within 60 doublings");
    }
    const double tp = detail::root_of_reduced(in, t_star, *hi);
    rep.t_minus = tm;
    rep.t_plus = tp;
    rep.energy_minus = psi(in, tm);
    rep.energy_plus = psi(in, tp);
    rep.residual_minus = detail::residual_at(in, tm);
    rep.residual_plus = detail::residual_at(in, tp);
    return rep;
}

/// inf_{t>0} psi(t): 0 unless a local minimum dips below zero; -inf when b = 0.
inline double fiber_infimum(const FiberInput& in) {
    const auto rep = classify_fiber(in);
    switch (rep.cls) {
    case FiberClass::SingleMax: return -std::numeric_limits<double>::infinity();
    case FiberClass::TwoCritical: return std::min(0.0, *rep.energy_plus);
    default: return 0.0;
    }
}

// --- extremal parameters of one direction --------------------------------

struct ExtremalPoint {
    /// lambda_0(u) or lambda(u). -inf when no finite extremal value exists (b = 0).
    double value = 0.0;
    /// Fiber location of the zero-energy minimum / degenerate critical point.
    double t = 0.0;
    /// False is the signed "below threshold" outcome: psi_{0,u} already
    /// changes sign, so no positive extremal parameter exists.
    bool positive = false;
    /// Probes at 0.99 and 1.01 times the value agreed with the definition.
    bool cross_checked = false;
};

/// d(value)/d(A, C, P), from the envelope identity at the solution.
struct ExtremalSensitivity {
    double dA = 0.0;
    double dC = 0.0;
    double dP = 0.0;
};

namespace detail {

// Unique positive root of alpha + beta t^2 - gamma t^e, alpha < 0, beta, gamma > 0,
// 0 < e < 2. The function decreases to its minimum at t_c and then increases.
inline double ratio_critical_point(double alpha, double beta, double gamma, double e) {
    const double t_c = std::pow(e * gamma / (2.0 * beta), 1.0 / (2.0 - e));
    auto m = [&](double t) {
        return std::pair{alpha + beta * t * t - gamma * std::pow(t, e),
                         2.0 * beta * t - e * gamma * std::pow(t, e - 1.0)};
    };
    const auto hi = roots::expand_until([&](double t) { return m(t).first > 0.0; }, 2.0 * t_c);
    if (!hi) {
        throw numerical_error("extremal parameter: critical point not bracketed");
    }
    const double lo = m(t_c).first < 0.0 ? t_c : 0.5 * t_c;
    auto r = roots::safeguarded_newton(m, lo, *hi, tol_root);
    if (!r.converged) {
        throw numerical_error("extremal parameter: iteration did not converge");
    }
    return r.x;
}

inline void require_perturbation(const FiberInput& in) {
    in.validate();
    if (!(in.P > 0.0)) {
        throw std::invalid_argument("extremal parameters need P = |u|_p^p > 0");
    }
}

} // namespace detail

/// lambda_0(u): the parameter at which the fiber has a zero-energy global minimum.
/// Solved by eliminating lambda from psi = psi' = 0, which is linear in lambda.
/// The lambda field of the input is ignored. With `cross_check` the result is
/// confirmed by classifying the fiber at 0.99 and 1.01 times the value.
inline ExtremalPoint lambda0_of_u(const FiberInput& input, bool cross_check = true) {
    FiberInput in = input;
    in.params.lambda = 0.0;
    detail::require_perturbation(in);
    const auto& pr = in.params;
    const double q = pr.q();
    const double p = pr.p;
    ExtremalPoint out;
    if (pr.b == 0.0) {
        out.value = -std::numeric_limits<double>::infinity();
        out.positive = false;
        return out;
    }
    // lambda(t) = p (aA/2 t^{2-p} + bA^2/4 t^{4-p} - C/q t^{q-p}) / P is
    // minimized where aA(2-p)/2 + bA^2(4-p)/4 t^2 - C(q-p)/q t^{q-2} = 0.
    const double t = detail::ratio_critical_point(0.5 * pr.a * in.A * (2.0 - p),
                                                  0.25 * pr.b * in.A * in.A * (4.0 - p),
                                                  in.C * (q - p) / q, q - 2.0);
    out.t = t;
    out.value = p *
                (0.5 * pr.a * in.A * std::pow(t, 2.0 - p) + 0.25 * pr.b * in.A * in.A * std::pow(t, 4.0 - p) -
                 in.C / q * std::pow(t, q - p)) /
                in.P;
    out.positive = out.value > 0.0;
    if (out.positive && cross_check) {
        const double above = fiber_infimum(FiberInput{in.A, in.C, in.P, pr.with_lambda(1.01 * out.value)});
        const double below = fiber_infimum(FiberInput{in.A, in.C, in.P, pr.with_lambda(0.99 * out.value)});
        out.cross_checked = above < 0.0 && below == 0.0;
    }
    return out;
}

/// lambda(u): the parameter at which the fiber has a degenerate critical point
/// (psi' = psi'' = 0). Below it the fiber is increasing.
inline ExtremalPoint lambda_of_u(const FiberInput& input, bool cross_check = true) {
    FiberInput in = input;
    in.params.lambda = 0.0;
    detail::require_perturbation(in);
    const auto& pr = in.params;
    const double q = pr.q();
    const double p = pr.p;
    ExtremalPoint out;
    if (pr.b == 0.0) {
        out.value = -std::numeric_limits<double>::infinity();
        out.positive = false;
        return out;
    }
    // lambda(t) = (aA t^{2-p} + bA^2 t^{4-p} - C t^{q-p}) / P
    const double t = detail::ratio_critical_point(pr.a * in.A * (2.0 - p), pr.b * in.A * in.A * (4.0 - p),
                                                  in.C * (q - p), q - 2.0);
    out.t = t;
    out.value = (pr.a * in.A * std::pow(t, 2.0 - p) + pr.b * in.A * in.A * std::pow(t, 4.0 - p) -
                 in.C * std::pow(t, q - p)) /
                in.P;
    out.positive = out.value > 0.0;
    if (out.positive && cross_check) {
        const auto above = classify_fiber(FiberInput{in.A, in.C, in.P, pr.with_lambda(1.01 * out.value)});
        const auto below = classify_fiber(FiberInput{in.A, in.C, in.P, pr.with_lambda(0.99 * out.value)});
        out.cross_checked = above.cls == FiberClass::TwoCritical && below.cls == FiberClass::Increasing;
    }
    return out;
}

inline ExtremalSensitivity lambda0_sensitivity(const FiberInput& in, const ExtremalPoint& x) {
    const auto& pr = in.params;
    const double q = pr.q();
    const double t = x.t;
    const double denom = in.P * std::pow(t, pr.p) / pr.p;
    return {(0.5 * pr.a * t * t + 0.5 * pr.b * in.A * t * t * t * t) / denom,
            -(std::pow(t, q) / q) / denom, -x.value / in.P};
}

inline ExtremalSensitivity lambda_sensitivity(const FiberInput& in, const ExtremalPoint& x) {
    const auto& pr = in.params;
    const double q = pr.q();
    const double t = x.t;
    const double denom = in.P * std::pow(t, pr.p - 1.0);
    return {(pr.a * t + 2.0 * pr.b * in.A * t * t * t) / denom, -std::pow(t, q - 1.0) / denom,
            -x.value / in.P};
}

// --- pluggable perturbation ----------------------------------------------

/// A one-dimensional perturbation along the ray, G(t) = int F(x, t u) dx,
/// with its first two derivatives in t.
template <class G>
concept RayPerturbation = requires(const G& g, double t) {
    { g.value(t) } -> std::convertible_to<double>;
    { g.d1(t) } -> std::convertible_to<double>;
    { g.d2(t) } -> std::convertible_to<double>;
};

struct PowerPerturbation {
    double P = 0.0;
    double p = 3.0;
    double value(double t) const { return P * std::pow(t, p) / p; }
    double d1(double t) const { return P * std::pow(t, p - 1.0); }
    double d2(double t) const { return (p - 1.0) * P * std::pow(t, p - 2.0); }
};

/// Fiber psi(t) = aA t^2/2 + bA^2 t^4/4 - C t^q/q - lambda G(t) for a general G.
template <RayPerturbation G>
struct GenericFiber {
    double aA = 1.0;
    double bA2 = 0.0;
    double C = 1.0;
    double q = 10.0 / 3.0;
    G g{};

    double psi0(double t) const { return 0.5 * aA * t * t + 0.25 * bA2 * t * t * t * t - C * std::pow(t, q) / q; }
    double dpsi0(double t) const { return aA * t + bA2 * t * t * t - C * std::pow(t, q - 1.0); }
    double d2psi0(double t) const { return aA + 3.0 * bA2 * t * t - (q - 1.0) * C * std::pow(t, q - 2.0); }
};

namespace detail {

// Newton on F(t, lambda) = 0 in two unknowns with a central-difference Jacobian.
template <class F>
std::optional<std::array<double, 2>> newton2(F&& f, std::array<double, 2> x, int max_iter = 100) {
    for (int it = 0; it < max_iter; ++it) {
        const auto r = f(x);
        double J[2][2];
        for (int j = 0; j < 2; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
            auto xp = x;
            auto xm = x;
            xp[j] += h;
            xm[j] -= h;
            const auto fp = f(xp);
            const auto fm = f(xm);
            J[0][j] = (fp[0] - fm[0]) / (2.0 * h);
            J[1][j] = (fp[1] - fm[1]) / (2.0 * h);
        }
        const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == 0.0 || !std::isfinite(det)) {
            return std::nullopt;
        }
        const double d0 = (r[0] * J[1][1] - r[1] * J[0][1]) / det;
        const double d1 = (J[0][0] * r[1] - J[1][0] * r[0]) / det;
        x[0] -= d0;
        x[1] -= d1;
        if (!(x[0] > 0.0)) {
            return std::nullopt;
        }
        if (std::abs(d0) <= 1e-13 * std::abs(x[0]) && std::abs(d1) <= 1e-13 * std::max(1.0, std::abs(x[1]))) {
            return x;
        }
    }
    return std::nullopt;
}

// Coarse log-grid minimum of ratio(t), used as a Newton starting point.
template <class R>
double scan_minimum(R&& ratio, double t_lo = 1e-6, double t_hi = 1e6, int n = 2000) {
    double best_t = t_lo;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / n);
        const double v = ratio(t);
        if (std::isfinite(v) && v < best) {
            best = v;
            best_t = t;
        }
    }
    return best_t;
}

} // namespace detail

/// lambda_0 for a general perturbation: 2-D Newton on psi = psi' = 0.
template <RayPerturbation G>
ExtremalPoint lambda0_generic(const GenericFiber<G>& f) {
    auto ratio = [&](double t) { return f.psi0(t) / f.g.value(t); };
    const double t0 = detail::scan_minimum(ratio);
    auto sys = [&](std::array<double, 2> x) {
        return std::array<double, 2>{f.psi0(x[0]) - x[1] * f.g.value(x[0]), f.dpsi0(x[0]) - x[1] * f.g.d1(x[0])};
    };
    const auto sol = detail::newton2(sys, {t0, ratio(t0)});
    if (!sol) {
        throw numerical_error("lambda0_generic: Newton iteration failed");
    }
    return {(*sol)[1], (*sol)[0], (*sol)[1] > 0.0, false};
}

/// lambda(u) for a general perturbation: 2-D Newton on psi' = psi'' = 0.
template <RayPerturbation G>
ExtremalPoint lambda_generic(const GenericFiber<G>& f) {
    auto ratio = [&](double t) { return f.dpsi0(t) / f.g.d1(t); };
    const double t0 = detail::scan_minimum(ratio);
    auto sys = [&](std::array<double, 2> x) {
        return std::array<double, 2>{f.dpsi0(x[0]) - x[1] * f.g.d1(x[0]), f.d2psi0(x[0]) - x[1] * f.g.d2(x[0])};
    };
    const auto sol = detail::newton2(sys, {t0, ratio(t0)});
    if (!sol) {
        throw numerical_error("lambda_generic: Newton iteration failed");
    }
    return {(*sol)[1], (*sol)[0], (*sol)[1] > 0.0, false};
}

// --- lambda = 0 analysis --------------------------------------------------

/// Level of the degenerate Nehari set at lambda = 0: (2*-2)^2 a^2 / (4 2* (4-2*) b).
inline double c0_level(int N, double a, double b) {
    const double q = critical_exponent(N);
    return (q - 2.0) * (q - 2.0) * a * a / (4.0 * q * (4.0 - q) * b);
}

/// (p-2)^2 a^2 / (4 p (4-p) b), the lower bound for levels reached by
/// sequences degenerating onto the inflection set.
inline double sigma_lower_bound(double a, double b, double p) {
    if (!(b > 0.0)) {
        throw std::invalid_argument("sigma_lower_bound requires b > 0");
    }
    return (p - 2.0) * (p - 2.0) * a * a / (4.0 * p * (4.0 - p) * b);
}

enum class HyperbolaSide { Below, On, Above };

inline HyperbolaSide compare_hyperbola(double value, double constant, double band = tol_degenerate) {
    const double rel = (value - constant) / constant;
    if (std::abs(rel) <= band) {
        return HyperbolaSide::On;
    }
    return rel < 0.0 ? HyperbolaSide::Below : HyperbolaSide::Above;
}

struct GHAnalysis {
    double S = 0.0;
    double t0_g = 0.0;
    double g_min = 0.0;
    double t0_h = 0.0;
    double h_min = 0.0;
    /// Critical points of t^2 g(t) (these are the zeros of h).
    std::optional<double> t_ab_minus;
    std::optional<double> t_ab_plus;
    std::optional<double> t_ab_degenerate;
    /// t^2 g(t) at the degenerate point, when it exists.
    std::optional<double> gbar_degenerate;
    double c0_level = 0.0;
    HyperbolaSide side_C1 = HyperbolaSide::Below;
    HyperbolaSide side_C2 = HyperbolaSide::Below;
};

/// Extremal analysis of g(t) = a/2 + b/4 t^2 - S^{-2*/2} t^{2*-2}/2* and
/// h(t) = a + b t^2 - S^{-2*/2} t^{2*-2}, taken against the embedding
/// constant S (defaults to the closed-form S_N).
inline GHAnalysis g_h_analysis(const ProblemParams& params, std::optional<double> S_opt = std::nullopt) {
    params.validate();
    if (!(params.b > 0.0)) {
        throw std::invalid_argument("g_h_analysis requires b > 0");
    }
    const int N = params.N;
    const double q = params.q();
    const double a = params.a;
    const double b = params.b;
    GHAnalysis out;
    out.S = S_opt.value_or(sobolev_constant(N).S_N);
    const double Sq = std::pow(out.S, -0.5 * q);

    auto g = [&](double t) { return 0.5 * a + 0.25 * b * t * t - Sq * std::pow(t, q - 2.0) / q; };
    auto h = [&](double t) {
        return std::pair{a + b * t * t - Sq * std::pow(t, q - 2.0), 2.0 * b * t - (q - 2.0) * Sq * std::pow(t, q - 3.0)};
    };

    out.t0_g = std::pow(q * b / (2.0 * (q - 2.0) * Sq), 1.0 / (q - 4.0));
    out.g_min = g(out.t0_g);
    out.t0_h = std::pow(2.0 * b / ((q - 2.0) * Sq), 1.0 / (q - 4.0));
    out.h_min = h(out.t0_h).first;
    out.c0_level = c0_level(N, a, b);

    const auto cc = critical_constants(N, out.S);
    const double hv = params.hyperbola_value();
    out.side_C1 = compare_hyperbola(hv, cc.C1);
    out.side_C2 = compare_hyperbola(hv, cc.C2);

    if (out.side_C2 == HyperbolaSide::On) {
        out.t_ab_degenerate = out.t0_h;
        out.gbar_degenerate = out.t0_h * out.t0_h * g(out.t0_h);
    } else if (out.side_C2 == HyperbolaSide::Below) {
        // h(0) = a > 0 and h(t0_h) < 0: one root on each side.
        double lo = out.t0_h;
        while (h(lo).first <= 0.0) {
            lo *= 0.5;
        }
        const auto hi = roots::expand_until([&](double t) { return h(t).first > 0.0; }, 2.0 * out.t0_h);
        if (!hi) {
            throw numerical_error("g_h_analysis: upper critical point not bracketed");
        }
        out.t_ab_minus = roots::safeguarded_newton(h, lo, out.t0_h, tol_root).x;
        out.t_ab_plus = roots::safeguarded_newton(h, out.t0_h, *hi, tol_root).x;
    }
    return out;
}

struct ThresholdClosedForms {
    double t0_u = 0.0;
    double b0_u = 0.0;
    double t_u = 0.0;
    double b_u = 0.0;
};

/// Closed-form solutions at lambda = 0 of psi = psi' = 0 (t0_u, b0_u) and
/// psi' = psi'' = 0 (t_u, b_u) in the unknowns (t, b).
inline ThresholdClosedForms threshold_closed_forms(double A, double C, double a, int N) {
    if (!(A > 0.0) || !(C > 0.0) || !(a > 0.0)) {
        throw std::invalid_argument("threshold_closed_forms: A, C, a must be positive");
    }
    if (N < 5) {
        throw std::invalid_argument("threshold_closed_forms: N must be at least 5");
    }
    const double q = critical_exponent(N);
    const double ratio_pow = std::pow(std::pow(C, 1.0 / q) / std::sqrt(A), N);
    const double a_pow = std::pow(a, 0.5 * (4.0 - N));
    ThresholdClosedForms out;
    out.t0_u = std::pow(q * a / (4.0 - q) * A / C, 1.0 / (q - 2.0));
    out.t_u = std::pow(2.0 * a / (4.0 - q) * A / C, 1.0 / (q - 2.0));
    out.b0_u = a_pow * scaled_C1(N) * ratio_pow;
    out.b_u = a_pow * scaled_C2(N) * ratio_pow;
    return out;
}

} // namespace kirchhoff
