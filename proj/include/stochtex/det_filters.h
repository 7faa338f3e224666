// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

// Deterministic reference filters. Each filter is expressed as a list of
// weighted taps (texel coordinate, MIP level, weight) and evaluated by
// summing weighted fetches, so the same tap lists also drive the shading
// comparisons. Raster coordinates put texel centers at integers; a lookup at
// s touches texels floor(s) + i.

#include <stochtex/kernels.h>
#include <stochtex/texture.h>

#include <array>
#include <span>
#include <vector>

namespace stochtex {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

struct FilterQuery2D {
    Vec2 st{};
    // Screen-space derivatives of the raster coordinate (level-0 texels).
    Vec2 dst0{};
    Vec2 dst1{};
    double mip_bias = 0;
};

struct FilterQuery3D {
    Vec3 p{};
};

struct WeightedTap {
    Coord coord;
    int level = 0;
    double weight = 1;
};

using TapList = std::vector<WeightedTap>;

template <TexelSource S>
Texel apply_taps(const S &src, std::span<const WeightedTap> taps, FetchCounter &counter) {
    Texel sum;
    for (const WeightedTap &t : taps)
        sum += t.weight * src.fetch(t.coord, t.level, counter);
    return sum;
}

// Separable window filters with weights normalized to sum to one.
TapList separable_taps(const KernelSpec &kernel, Vec2 st, int level = 0);
TapList separable_taps(const KernelSpec &kernel, Vec3 p);

TapList bilinear_taps(Vec2 st, int level = 0);
TapList trilinear_taps(Vec3 p);
TapList bicubic_bspline_taps(Vec2 st);
TapList tricubic_bspline_taps(Vec3 p);
TapList bicubic_keys_taps(Vec2 st, double a = -0.5);
// radius <= 0 uses 3 sigma.
TapList gaussian_window_taps(Vec2 st, double sigma, double radius = 0);

Texel filter_bilinear(const TextureGrid &tex, const FilterQuery2D &q, FetchCounter &counter);
Texel filter_trilinear(const TextureGrid &tex, const FilterQuery3D &q, FetchCounter &counter);
Texel filter_bicubic_bspline(const TextureGrid &tex, const FilterQuery2D &q, FetchCounter &counter);
Texel filter_tricubic_bspline(const TextureGrid &tex, const FilterQuery3D &q,
                              FetchCounter &counter);
Texel filter_bicubic_keys(const TextureGrid &tex, const FilterQuery2D &q, double a,
                          FetchCounter &counter);
Texel filter_gaussian_window(const TextureGrid &tex, const FilterQuery2D &q, double sigma,
                             double radius, FetchCounter &counter);

// EWA --------------------------------------------------------------------

inline constexpr int kEwaLutSize = 1024;

// Gaussian profile exp(-2 r^2) tabulated at r^2 = i / kEwaLutSize.
const std::array<float, kEwaLutSize> &ewa_lut();

// Weight for a squared ellipse radius r2 in [0,1).
double ewa_weight(double r2);

// Ellipse A ss^2 + B ss tt + C tt^2 < 1 and its integer bounding box.
struct EwaEllipse {
    double a = 0, b = 0, c = 0;
    int s0 = 0, s1 = -1, t0 = 0, t1 = -1;

    double r2(double ss, double tt) const { return a * ss * ss + b * ss * tt + c * tt * tt; }
};

EwaEllipse ewa_ellipse(Vec2 st, Vec2 dst0, Vec2 dst1);

bool ewa_degenerate(Vec2 dst0, Vec2 dst1);

// Unnormalized EWA weights on one level. st and derivatives are in that
// level's raster units. Zero derivatives fall back to bilinear taps.
TapList ewa_taps(Vec2 st, Vec2 dst0, Vec2 dst1, int level = 0);

// Level selection for EWA from the minor ellipse axis, plus the query's bias.
double ewa_lod(const FilterQuery2D &q, int num_levels);

// EWA over a pyramid: single-level EWA at floor(lod) and floor(lod)+1
// blended by frac(lod). Weights are normalized per level.
TapList ewa_mip_taps(const FilterQuery2D &q, int num_levels);

Texel filter_ewa(const TextureGrid &tex, const FilterQuery2D &q, FetchCounter &counter);
Texel filter_ewa(const MipPyramid &pyramid, const FilterQuery2D &q, FetchCounter &counter);

// LOD selection ------------------------------------------------------------

struct AnisoLod {
    double lod = 0;
    Vec2 major_axis{};
    double minor_length = 0;
    double major_length = 0;
};

// grads = (du/dx, dv/dx, du/dy, dv/dy) in normalized texture units; dims
// scales them to texels. The minor axis is lengthened so that the
// major/minor ratio does not exceed max_aniso, and
// lod = clamp(log2(minor) + jitter, min_lod, max_lod). jitter = u - 0.5
// gives the stochastic variant; the deterministic one passes u = 0.5.
AnisoLod compute_aniso_lod(std::array<int, 2> dims, std::array<double, 4> grads, double min_lod,
                           double max_lod, double max_aniso = 64, double u = 0.5);

// Conventional trilinear LOD: log2 of the longer derivative plus bias.
double isotropic_lod(const FilterQuery2D &q, int num_levels);

// Bilinear on levels floor(lod) and floor(lod)+1 (clamped), blended by
// frac(lod). Always eight taps.
TapList trilinear_mip_taps(Vec2 st, double lod, int num_levels);
Texel filter_trilinear_mip(const MipPyramid &pyramid, const FilterQuery2D &q,
                           FetchCounter &counter);
Texel filter_trilinear_mip(const MipPyramid &pyramid, Vec2 st, double lod,
                           FetchCounter &counter);

// Normalized weighted mixture of already-filtered values.
Texel blend_weighted(std::span<const Texel> values, std::span<const double> weights);

} // namespace stochtex
