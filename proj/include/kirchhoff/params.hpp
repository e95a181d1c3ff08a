#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace kirchhoff {

/// Raised when an iterative solve cannot produce a trustworthy answer
/// (lost bracket, stagnation). Invalid user input uses std::invalid_argument.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sobolev critical exponent 2N/(N-2).
inline double critical_exponent(int N) {
    if (N < 3) {
        throw std::invalid_argument("critical exponent needs N >= 3");
    }
    return 2.0 * N / (N - 2.0);
}

/// Parameters of -(a + b|grad u|^2) Lap u = |u|^{2*-2}u + lambda |u|^{p-2}u.
///
/// b = 0 is admitted for the Brezis-Nirenberg limit path.
struct ProblemParams {
    int N = 5;
    double a = 1.0;
    double b = 0.0;
    double lambda = 0.0;
    double p = 3.0;

    double q() const { return critical_exponent(N); }

    /// a^{(N-4)/2} b, the quantity compared against the critical hyperbolas.
    double hyperbola_value() const { return std::pow(a, 0.5 * (N - 4)) * b; }

    void validate() const {
        if (N < 5) {
            throw std::invalid_argument("dimension N must be at least 5, got " + std::to_string(N));
        }
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw std::invalid_argument("a must be positive");
        }
        if (!(b >= 0.0) || !std::isfinite(b)) {
            throw std::invalid_argument("b must be non-negative");
        }
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
            throw std::invalid_argument("lambda must be non-negative");
        }
        if (!(p > 2.0 && p < q())) {
            throw std::invalid_argument("p must lie in (2, 2*) = (2, " + std::to_string(q()) + ")");
        }
    }

    ProblemParams with_b(double value) const {
        ProblemParams out = *this;
        out.b = value;
        return out;
    }
    ProblemParams with_lambda(double value) const {
        ProblemParams out = *this;
        out.lambda = value;
        return out;
    }
};

} // namespace kirchhoff
