// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/sampling.h>

#include <algorithm>
#include <cmath>

namespace stochtex {

ReuseResult sample_reuse(double xi, double p) {
    if (p <= 0)
        return {false, xi};
    if (p >= 1)
        return {true, xi};
    if (xi < p)
        return {true, std::min(xi / p, kOneMinusEpsilon)};
    return {false, std::min((xi - p) / (1 - p), kOneMinusEpsilon)};
}

namespace {

double checked_sum(std::span<const double> weights, const char *what) {
    double sum = 0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0)
            throw ParameterError(std::string(what) + ": weights must be finite and non-negative");
        sum += w;
    }
    if (!(sum > 0))
        throw ParameterError(std::string(what) + ": at least one weight must be positive");
    return sum;
}

} // namespace

DiscreteSampleResult sample_discrete(std::span<const double> weights, double xi) {
    double sum = checked_sum(weights, "sample_discrete");
    double target = xi * sum;
    double prefix = 0;
    int last_positive = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        double w = weights[j];
        if (w <= 0)
            continue;
        last_positive = int(j);
        if (target < prefix + w)
            return {int(j), std::clamp((target - prefix) / w, 0.0, kOneMinusEpsilon)};
        prefix += w;
    }
    // Round-off pushed target past the final prefix sum.
    return {last_positive, kOneMinusEpsilon};
}

DiscreteSampleResult reservoir_sample(std::span<const double> weights, double xi) {
    checked_sum(weights, "reservoir_sample");
    WeightedReservoir r;
    for (std::size_t j = 0; j < weights.size(); ++j)
        r.add(int(j), weights[j], xi);
    return {r.selected(), xi};
}

PositivizedSample positivized_sample(std::span<const double> weights, double xi) {
    WeightedReservoir pos, neg;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        double w = weights[j];
        if (!std::isfinite(w))
            throw ParameterError("positivized_sample: weights must be finite");
        if (w < 0)
            neg.add(int(j), -w, xi);
        else
            pos.add(int(j), w, xi);
    }
    if (pos.empty())
        throw ParameterError("positivized_sample: at least one weight must be positive");
    PositivizedSample out;
    out.pos = {pos.selected(), xi};
    out.pos_sum = pos.total();
    if (!neg.empty()) {
        out.neg = DiscreteSampleResult{neg.selected(), xi};
        out.neg_sum = neg.total();
    }
    return out;
}

} // namespace stochtex
