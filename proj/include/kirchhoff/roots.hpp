#pragma once

#include "kirchhoff/params.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <tuple>
#include <utility>

namespace kirchhoff::roots {

struct Root {
    double x = 0.0;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

inline constexpr double default_rtol = 1e-12;

/// Newton iteration kept inside [lo, hi]; falls back to bisection whenever
/// the Newton step leaves the bracket or fails to halve the previous step.
/// `fdf(x)` returns {f(x), f'(x)}. f(lo) and f(hi) must differ in sign.
template <class FDF>
Root safeguarded_newton(FDF&& fdf, double lo, double hi, double rtol = default_rtol,
                        int max_iter = 200) {
    auto [flo, dlo] = fdf(lo);
    auto [fhi, dhi] = fdf(hi);
    (void)dlo;
    (void)dhi;
    if (flo == 0.0) {
        return {lo, 0.0, 0, true};
    }
    if (fhi == 0.0) {
        return {hi, 0.0, 0, true};
    }
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw numerical_error("safeguarded_newton: root is not bracketed");
    }
    // orient so that f(xl) < 0 < f(xh)
    double xl = lo;
    double xh = hi;
    if (flo > 0.0) {
        std::swap(xl, xh);
    }

    double x = 0.5 * (lo + hi);
    double dx_old = std::abs(hi - lo);
    double dx = dx_old;
    auto [f, df] = fdf(x);
    for (int it = 1; it <= max_iter; ++it) {
        const bool newton_out = ((x - xh) * df - f) * ((x - xl) * df - f) >= 0.0;
        const bool too_slow = std::abs(2.0 * f) > std::abs(dx_old * df);
        if (newton_out || too_slow || !std::isfinite(df)) {
            dx_old = dx;
            dx = 0.5 * (xh - xl);
            x = xl + dx;
        } else {
            dx_old = dx;
            dx = f / df;
            x -= dx;
        }
        std::tie(f, df) = fdf(x);
        if (f == 0.0) {
            return {x, f, it, true};
        }
        if (f < 0.0) {
            xl = x;
        } else {
            xh = x;
        }
        if (std::abs(dx) <= rtol * std::abs(x) || std::abs(xh - xl) <= rtol * std::abs(x)) {
            return {x, f, it, true};
        }
    }
    return {x, f, max_iter, false};
}

/// Multiply `start` by `factor` until `pred` holds; at most `max_steps` times.
template <class Pred>
std::optional<double> expand_until(Pred&& pred, double start, double factor = 2.0,
                                   int max_steps = 60) {
    double x = start;
    for (int i = 0; i <= max_steps; ++i) {
        if (pred(x)) {
            return x;
        }
        x *= factor;
    }
    return std::nullopt;
}

/// Plain bisection on a predicate that is false at lo and true at hi.
template <class Pred>
double bisect_predicate(Pred&& pred, double lo, double hi, double rtol = 1e-10,
                        int max_iter = 200) {
    for (int i = 0; i < max_iter && hi - lo > rtol * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace kirchhoff::roots
