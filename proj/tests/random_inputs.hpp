#pragma once

#include "kirchhoff/fiber.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace testing_inputs {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }

    /// FiberInput at N = 5, p = 3 spanning all classes: b is drawn relative to
    /// the inflection threshold b(u) of the lambda = 0 fiber.
    kirchhoff::FiberInput fiber_input() {
        kirchhoff::FiberInput in;
        in.A = log_uniform(0.1, 10.0);
        in.C = log_uniform(0.1, 10.0);
        in.P = log_uniform(0.1, 10.0);
        in.params.a = log_uniform(0.25, 4.0);
        const auto cf = kirchhoff::threshold_closed_forms(in.A, in.C, in.params.a, 5);
        const int mode = pick(4);
        in.params.b = mode == 0 ? 0.0 : cf.b_u * log_uniform(0.2, 5.0);
        in.params.lambda = pick(2) == 0 ? 0.0 : log_uniform(1e-3, 2.0);
        return in;
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

} // namespace testing_inputs
