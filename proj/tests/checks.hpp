#pragma once

#include "kirchhoff/discrete.hpp"

#include <cmath>
#include <vector>

namespace checks {

struct GradientOrder {
    std::vector<double> errors;
    std::vector<double> orders;
};

/// Errors of central differences of the energy along v against the analytic
/// derivative residual . v, for steps h, h/2, h/4, ...; and the observed
/// orders log2(e(h)/e(h/2)).
inline GradientOrder gradient_order(const kirchhoff::DiscreteFunction& u, const kirchhoff::DiscreteFunction& v,
                                    const kirchhoff::ProblemParams& pr, double h0, int levels) {
    const auto eg = kirchhoff::energy_and_gradient(u, pr);
    double exact = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        exact += eg.residual[i] * v[i];
    }
    GradientOrder out;
    double h = h0;
    for (int k = 0; k < levels; ++k, h *= 0.5) {
        const double fd =
            (kirchhoff::energy(u.axpy(h, v), pr) - kirchhoff::energy(u.axpy(-h, v), pr)) / (2.0 * h);
        out.errors.push_back(std::abs(fd - exact));
    }
    for (std::size_t k = 1; k < out.errors.size(); ++k) {
        out.orders.push_back(std::log2(out.errors[k - 1] / out.errors[k]));
    }
    return out;
}

} // namespace checks
