#pragma once

// Deterministic families of start directions for multi-start searches.

#include "kirchhoff/bubble.hpp"
#include "kirchhoff/descent.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace kirchhoff {

struct StartDirection {
    std::string label;
    DiscreteFunction u;
};

/// (1 - r^2)(1 + sum_k c_k cos(k pi r)/k), c_k uniform in (-1, 1), normalized.
/// Uses the raw engine output so that the profile is identical on every platform.
inline DiscreteFunction random_profile(const MeshPtr& mesh, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::array<double, 6> c{};
    for (double& x : c) {
        x = 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
    }
    auto u = DiscreteFunction::sample(mesh, [&](double r) {
        double s = 1.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            s += c[k] * std::cos((k + 1) * std::numbers::pi * r) / static_cast<double>(k + 1);
        }
        return (1.0 - r * r) * s;
    });
    return normalize_h1(u);
}

/// Default policy: bubbles at eps = 0.1, 0.01, 0.001; (1 - r^2)^k for
/// k = 1, 2, 3; seeded random profiles for the remainder.
inline std::vector<StartDirection> default_starts(const MeshPtr& mesh, int n_starts = 8, std::uint64_t seed = 0) {
    if (n_starts < 1) {
        throw std::invalid_argument("default_starts: n_starts must be positive");
    }
    std::vector<StartDirection> out;
    for (double eps : {0.1, 0.01, 0.001}) {
        out.push_back({"bubble eps=" + std::to_string(eps), bubble(mesh, eps).u});
    }
    for (int k = 1; k <= 3; ++k) {
        auto u = DiscreteFunction::sample(mesh, [k](double r) { return std::pow(1.0 - r * r, k); });
        out.push_back({"(1-r^2)^" + std::to_string(k), normalize_h1(u)});
    }
    for (int j = 0; static_cast<int>(out.size()) < n_starts; ++j) {
        out.push_back({"random #" + std::to_string(j), random_profile(mesh, seed + static_cast<std::uint64_t>(j))});
    }
    out.resize(n_starts, out.front());
    return out;
}

} // namespace kirchhoff
