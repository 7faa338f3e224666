// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

// Stochastic texture filters. Each one picks one texel (two for the
// positivized Keys cubic) with probability given by its deterministic
// counterpart's weights, so a single fetch is an unbiased estimate of the
// filtered value. Selection functions are pure functions of the lookup
// point and the uniform(s); evaluation against a texel source is separate.

#include <stochtex/det_filters.h>
#include <stochtex/sampling.h>

#include <array>
#include <span>

namespace stochtex {

// One or two signed taps. Plain estimators carry a single tap of weight 1.
struct TapSet {
    std::array<WeightedTap, 2> taps{};
    int count = 0;

    void push(const WeightedTap &t) { taps[count++] = t; }
    std::span<const WeightedTap> view() const { return {taps.data(), std::size_t(count)}; }
};

struct TapEstimate {
    TapSet taps;
    Texel value;
    std::uint64_t fetches = 0;
};

template <TexelSource S>
TapEstimate evaluate(const S &src, const TapSet &taps, FetchCounter &counter) {
    std::uint64_t before = counter.count + counter.decode_count;
    TapEstimate e{taps, apply_taps(src, taps.view(), counter), 0};
    e.fetches = counter.count + counter.decode_count - before;
    return e;
}

struct CoordSample {
    Coord coord;
    double xi = 0;
};

// Bilinear/trilinear: one sample_reuse decision per axis.
CoordSample stoch_bilinear(Vec2 st, double xi);
CoordSample stoch_trilinear(Vec3 p, double xi);

// Cubic B-spline: weighted reservoir over the four K_bs weights per axis.
CoordSample stoch_bicubic_bspline(Vec2 st, double xi);
CoordSample stoch_tricubic_bspline(Vec3 p, double xi);

// Keys cubic via positivization over the 16 signed weights: a positive tap
// with weight sum(w+) and, when any weight is negative, a negative tap with
// weight -sum(w-).
TapSet stoch_bicubic_keys_taps(Vec2 st, double xi, double a = -0.5);

template <TexelSource S>
TapEstimate stoch_bicubic_keys(const S &tex, Vec2 st, double xi, double a,
                               FetchCounter &counter) {
    return evaluate(tex, stoch_bicubic_keys_taps(st, xi, a), counter);
}

// EWA on a single level: reservoir over the LUT weights of in-ellipse
// texels. Zero derivatives fall back to stoch_bilinear.
CoordSample stoch_ewa(Vec2 st, Vec2 dst0, Vec2 dst1, double xi);

// EWA over a pyramid: picks level floor(lod) + 1 with probability frac(lod)
// (else floor(lod)), then samples the ellipse on that level.
TapSet stoch_ewa_mip_taps(const FilterQuery2D &q, int num_levels, double xi);

struct LevelSample {
    int level = 0;
    double xi = 0;
};

// Level floor(lod) + 1 with probability frac(lod), else floor(lod); i.e.
// round(lod + xi - 0.5), clamped to [min_level, max_level].
LevelSample stoch_mip_level(double lod, double xi, int min_level, int max_level);

// Stochastic counterpart of trilinear_mip_taps: level then bilinear texel.
TapSet stoch_trilinear_mip_taps(Vec2 st, double lod, int num_levels, double xi);

// Filter importance sampling ---------------------------------------------

// Two standard normal variates from two uniforms.
Vec2 box_muller(double xi1, double xi2);

// Gaussian offset followed by a nearest-texel lookup. The realized filter
// is the Gaussian convolved with a unit box.
Coord fis_gaussian(Vec2 st, double sigma, double xi1, double xi2);

// Tap probabilities of fis_gaussian: per axis, the Gaussian mass of the cell
// [k - 0.5, k + 0.5) around s, over texels within ceil(6 sigma) + 1.
TapList fis_gaussian_taps(Vec2 st, double sigma);

// Sum of n uniforms minus n/2, then nearest lookup: the realized filter is
// the degree-n B-spline (n = 1 tent, n = 3 cubic). xis holds n values.
int fis_bspline_axis(double s, int n, std::span<const double> xis);
// xis holds n values per axis, x first.
Coord fis_bspline(Vec2 st, int n, std::span<const double> xis);
Coord fis_bspline(Vec3 p, int n, std::span<const double> xis);

// Discrete Gaussian over the window [floor(s) - r + 1, floor(s) + r] per
// axis, r = ceil(radius) (radius 2 is a 4x4 window), by weighted reservoir.
CoordSample discrete_gaussian_sample(Vec2 st, double sigma, double xi, double radius = 2);

// Chooses one branch of a weighted mixture; only that branch needs to be
// evaluated.
DiscreteSampleResult stoch_blend(std::span<const double> weights, double xi);

} // namespace stochtex
