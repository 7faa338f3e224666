// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

// Filtering order experiments. A scalar shading map g stands in for the
// material evaluation: "before" filters the texture and shades the filtered
// value, "after" shades every texel and filters the results. The two agree
// only when g is affine. The single-tap stochastic estimator shades the one
// texel it fetches, so it converges to the "after" answer.

#include <stochtex/filter_dispatch.h>
#include <stochtex/rng.h>

#include <cmath>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stochtex {

class ShadingMap {
  public:
    enum class Kind { Identity, Power, Exp, PlanckLike, Threshold, MetalnessMix };

    static ShadingMap identity() { return {Kind::Identity, 0, 0}; }
    // copysign(|x|^k, x), so negative inputs stay defined for any k.
    static ShadingMap power(double k) { return {Kind::Power, k, 0}; }
    // exp(s * x).
    static ShadingMap exp(double s) { return {Kind::Exp, s, 0}; }
    // 1 / (exp(c / t) - 1) for t > 0, 0 for t <= 0. With c = 1 the range
    // [0.1, 1] maps over four orders of magnitude.
    static ShadingMap planck(double c = 1) { return {Kind::PlanckLike, c, 0}; }
    // 1 if x >= theta, else 0.
    static ShadingMap threshold(double theta) { return {Kind::Threshold, theta, 0}; }
    // lerp(diffuse, specular, m); affine in m.
    static ShadingMap metalness(double diffuse, double specular) {
        return {Kind::MetalnessMix, diffuse, specular};
    }

    // "identity", "power:k", "exp:s", "planck:c", "threshold:t",
    // "metalness:d:s". Throws ParameterError.
    static ShadingMap parse(std::string_view text);
    // Inverse of parse.
    std::string to_string() const;

    double operator()(double x) const;

    Kind kind() const { return kind_; }
    bool affine() const { return kind_ == Kind::Identity || kind_ == Kind::MetalnessMix; }

  private:
    ShadingMap(Kind k, double p0, double p1) : kind_(k), p0_(p0), p1_(p1) {}
    Kind kind_;
    double p0_, p1_;
};

namespace detail {

inline TapList query_taps(const FilterSettings &f, Estimator e, const FilterQuery2D &q,
                          int levels) {
    return reference_taps(f, e, q, levels);
}
inline TapList query_taps(const FilterSettings &f, Estimator e, const FilterQuery3D &q, int) {
    return reference_taps(f, e, q);
}
inline TapSet query_stoch_taps(const FilterSettings &f, Estimator e, const FilterQuery2D &q,
                               int levels, RngStream &rng) {
    return stochastic_taps(f, e, q, levels, rng);
}
inline TapSet query_stoch_taps(const FilterSettings &f, Estimator e, const FilterQuery3D &q, int,
                               RngStream &rng) {
    return stochastic_taps(f, e, q, rng);
}

} // namespace detail

// In all three, the filter is the one estimator `e` converges to (for Fis,
// the realized filter), and `channel` selects the shaded channel.

// g(filtered value).
template <TexelSource S, class Query>
double shade_filter_before(const S &src, const Query &q, const FilterSettings &f,
                           const ShadingMap &g, Estimator e = Estimator::Stochastic,
                           int channel = 0) {
    FetchCounter counter;
    TapList taps = detail::query_taps(f, e, q, src.num_levels());
    return g(apply_taps(src, taps, counter)[channel]);
}

// Sum of w_i g(t_i) over the full tap window.
template <TexelSource S, class Query>
double shade_filter_after_ref(const S &src, const Query &q, const FilterSettings &f,
                              const ShadingMap &g, Estimator e = Estimator::Stochastic,
                              int channel = 0) {
    FetchCounter counter;
    double sum = 0;
    for (const WeightedTap &t : detail::query_taps(f, e, q, src.num_levels()))
        sum += t.weight * g(src.fetch(t.coord, t.level, counter)[channel]);
    return sum;
}

// One stochastic lookup, shading the fetched texel(s).
template <TexelSource S, class Query>
double shade_filter_after_stoch(const S &src, const Query &q, const FilterSettings &f,
                                Estimator e, const ShadingMap &g, RngStream &rng,
                                FetchCounter &counter, int channel = 0) {
    TapSet taps = detail::query_stoch_taps(f, e, q, src.num_levels(), rng);
    double sum = 0;
    for (const WeightedTap &t : taps.view())
        sum += t.weight * g(src.fetch(t.coord, t.level, counter)[channel]);
    return sum;
}

struct OrderRow {
    double query_u = 0, query_v = 0;
    double before = 0, after_ref = 0;
    double after_stoch_mean = 0, after_stoch_sem = 0;
    // |before - after_ref|
    double abs_diff = 0;
};

struct OrderReportOptions {
    Estimator estimator = Estimator::Stochastic;
    long long samples = 10000;
    std::uint64_t seed = 0;
    int channel = 0;
    unsigned threads = 0;
};

// One row per query. Query i draws from RngStream(seed, i), so rows do not
// depend on the thread count.
std::vector<OrderRow> order_divergence_report(const TextureGrid &tex, const ShadingMap &g,
                                              const FilterSettings &f,
                                              std::span<const FilterQuery2D> queries,
                                              const OrderReportOptions &options = {});
std::vector<OrderRow> order_divergence_report(const MipPyramid &tex, const ShadingMap &g,
                                              const FilterSettings &f,
                                              std::span<const FilterQuery2D> queries,
                                              const OrderReportOptions &options = {});

void write_order_csv(std::ostream &out, std::span<const OrderRow> rows);

// Sample mean and standard error of the mean.
struct MeanSem {
    double mean = 0, sem = 0;
};

template <class Draw>
MeanSem mean_and_sem(long long n, Draw &&draw) {
    // Welford.
    double mean = 0, m2 = 0;
    for (long long i = 0; i < n; ++i) {
        double x = draw();
        double d = x - mean;
        mean += d / double(i + 1);
        m2 += d * (x - mean);
    }
    double var = n > 1 ? m2 / double(n - 1) : 0;
    return {mean, n > 0 ? std::sqrt(var / double(n)) : 0};
}

} // namespace stochtex
