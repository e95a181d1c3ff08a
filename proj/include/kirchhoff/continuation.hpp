#pragma once

// Warm-started N^- minimization along b_k -> 0 towards the Brezis-Nirenberg limit.

#include "kirchhoff/nehari.hpp"
#include "kirchhoff/verify.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace kirchhoff {

struct ContinuationResult {
    std::vector<double> b_values;
    /// One entry per completed step; shorter than b_values after an abort.
    std::vector<NehariResult> steps;
    bool completed = false;
    /// Index of the first b_k at which N^- membership was lost.
    std::optional<std::size_t> aborted_at;
    std::string abort_reason;
    /// Levels non-increasing along the completed steps (relative tolerance 1e-9).
    bool monotone = true;
    /// Verification of the last completed step against its own equation
    /// (the Brezis-Nirenberg equation when the sequence ends at b = 0).
    std::optional<VerificationReport> limit;
    std::optional<double> limit_b;

    std::optional<std::size_t> last_good_index() const {
        if (steps.empty()) {
            return std::nullopt;
        }
        return steps.size() - 1;
    }
};

inline constexpr double continuation_monotone_tol = 1e-9;

/// `params` supplies N, a, lambda, p; its b is replaced by each b_k in turn.
inline ContinuationResult continuation_b_to_zero(const ProblemParams& params, const std::vector<double>& b_seq,
                                                 const DiscreteFunction& start, const SolverOptions& opt = {}) {
    params.with_b(0.0).validate();
    if (!(params.lambda > 0.0)) {
        throw std::invalid_argument("continuation_b_to_zero: lambda must be positive");
    }
    if (b_seq.empty()) {
        throw std::invalid_argument("continuation_b_to_zero: empty b sequence");
    }
    for (std::size_t k = 0; k < b_seq.size(); ++k) {
        if (!(b_seq[k] >= 0.0) || (k > 0 && !(b_seq[k] < b_seq[k - 1]))) {
            throw std::invalid_argument("continuation_b_to_zero: b sequence must be non-negative and strictly decreasing");
        }
    }
    ContinuationResult out;
    out.b_values = b_seq;
    DiscreteFunction warm = start;
    for (std::size_t k = 0; k < b_seq.size(); ++k) {
        const auto pk = params.with_b(b_seq[k]);
        try {
            auto res = nehari_minus_minimize(pk, warm, opt);
            if (!(res.d2psi < 0.0)) {
                throw nehari_empty_error("minimizer is not on N^- (psi''(1) >= 0)");
            }
            warm = res.minimizer;
            out.steps.push_back(std::move(res));
        } catch (const numerical_error& e) {
            out.aborted_at = k;
            out.abort_reason = e.what();
            break;
        }
    }
    out.completed = !out.aborted_at.has_value();
    for (std::size_t k = 1; k < out.steps.size(); ++k) {
        const double prev = out.steps[k - 1].level;
        if (out.steps[k].level > prev + continuation_monotone_tol * std::max(1.0, std::abs(prev))) {
            out.monotone = false;
        }
    }
    if (!out.steps.empty()) {
        const double b_last = b_seq[out.steps.size() - 1];
        out.limit_b = b_last;
        out.limit = verify_solution(out.steps.back().minimizer, params.with_b(b_last));
    }
    return out;
}

} // namespace kirchhoff
