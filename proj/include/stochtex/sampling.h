// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

// Discrete sampling primitives that consume a single uniform and hand back a
// remapped uniform for the next decision.

#include <stochtex/common.h>

#include <optional>
#include <span>

namespace stochtex {

// Largest double below one; remapped uniforms are clamped to it.
inline constexpr double kOneMinusEpsilon = 0x1.fffffffffffffp-1;

struct ReuseResult {
    bool accepted = false;
    double xi = 0;
};

// Accepts when xi < p and rescales xi to a fresh uniform within the chosen
// branch. For p <= 0 or p >= 1 the branch is forced and xi is returned
// unchanged.
ReuseResult sample_reuse(double xi, double p);

struct DiscreteSampleResult {
    int index = 0;
    double xi_out = 0;
};

// Picks index j with probability w_j / sum(w) by scanning the running sum.
// Weights need not be normalized. Throws ParameterError when a weight is
// negative or non-finite, or when all weights are zero.
DiscreteSampleResult sample_discrete(std::span<const double> weights, double xi);

// Single-item weighted reservoir. The caller owns the uniform and threads it
// through successive add() calls, so several reservoirs can share one xi.
class WeightedReservoir {
  public:
    // Offers item `index` with weight w >= 0; returns true if it replaced the
    // current selection. Zero weights are skipped without touching xi.
    bool add(int index, double w, double &xi) {
        if (w <= 0)
            return false;
        total_ += w;
        ReuseResult r = sample_reuse(xi, w / total_);
        xi = r.xi;
        if (r.accepted)
            selected_ = index;
        return r.accepted;
    }

    bool empty() const { return selected_ < 0; }
    int selected() const { return selected_; }
    double total() const { return total_; }

  private:
    int selected_ = -1;
    double total_ = 0;
};

// One pass over the weights with O(1) state; same distribution as
// sample_discrete.
DiscreteSampleResult reservoir_sample(std::span<const double> weights, double xi);

struct PositivizedSample {
    DiscreteSampleResult pos;
    double pos_sum = 0;
    std::optional<DiscreteSampleResult> neg;
    double neg_sum = 0;
};

// Splits signed weights into positive and negative sets and draws one index
// from each (two reservoirs sharing xi). The estimate
// pos_sum * t[pos] - neg_sum * t[neg] is unbiased for sum_i w_i t_i.
// `neg` is empty when no weight is negative. Throws ParameterError if no
// weight is positive or a weight is non-finite.
PositivizedSample positivized_sample(std::span<const double> weights, double xi);

// Stochastic linear interpolation: v0 when xi > t, else v1. Expectation is
// (1 - t) v0 + t v1.
template <class T>
T stoch_lerp(const T &v0, const T &v1, double t, double xi) {
    return xi > t ? v0 : v1;
}

} // namespace stochtex
