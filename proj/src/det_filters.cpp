// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/det_filters.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stochtex {

TapList separable_taps(const KernelSpec &kernel, Vec2 st, int level) {
    double fs = std::floor(st[0]), ft = std::floor(st[1]);
    KernelWindow ws = kernel_weights_window(kernel, st[0] - fs);
    KernelWindow wt = kernel_weights_window(kernel, st[1] - ft);
    if (ws.sum == 0 || wt.sum == 0)
        throw ParameterError("separable filter: window weights sum to zero");
    TapList taps;
    taps.reserve(ws.weights.size() * wt.weights.size());
    for (std::size_t j = 0; j < wt.weights.size(); ++j)
        for (std::size_t i = 0; i < ws.weights.size(); ++i)
            taps.push_back({{int(fs) + ws.first_offset + int(i), int(ft) + wt.first_offset + int(j), 0},
                            level,
                            (ws.weights[i] / ws.sum) * (wt.weights[j] / wt.sum)});
    return taps;
}

TapList separable_taps(const KernelSpec &kernel, Vec3 p) {
    std::array<KernelWindow, 3> w;
    std::array<int, 3> base;
    for (int d = 0; d < 3; ++d) {
        double f = std::floor(p[d]);
        base[d] = int(f);
        w[d] = kernel_weights_window(kernel, p[d] - f);
        if (w[d].sum == 0)
            throw ParameterError("separable filter: window weights sum to zero");
    }
    TapList taps;
    taps.reserve(w[0].weights.size() * w[1].weights.size() * w[2].weights.size());
    for (std::size_t k = 0; k < w[2].weights.size(); ++k)
        for (std::size_t j = 0; j < w[1].weights.size(); ++j)
            for (std::size_t i = 0; i < w[0].weights.size(); ++i)
                taps.push_back({{base[0] + w[0].first_offset + int(i),
                                 base[1] + w[1].first_offset + int(j),
                                 base[2] + w[2].first_offset + int(k)},
                                0,
                                (w[0].weights[i] / w[0].sum) * (w[1].weights[j] / w[1].sum) *
                                    (w[2].weights[k] / w[2].sum)});
    return taps;
}

TapList bilinear_taps(Vec2 st, int level) {
    int s = int(std::floor(st[0])), t = int(std::floor(st[1]));
    double ds = st[0] - s, dt = st[1] - t;
    return {{{s, t, 0}, level, (1 - ds) * (1 - dt)},
            {{s + 1, t, 0}, level, ds * (1 - dt)},
            {{s, t + 1, 0}, level, (1 - ds) * dt},
            {{s + 1, t + 1, 0}, level, ds * dt}};
}

TapList trilinear_taps(Vec3 p) {
    int b[3];
    double f[3];
    for (int d = 0; d < 3; ++d) {
        b[d] = int(std::floor(p[d]));
        f[d] = p[d] - b[d];
    }
    TapList taps;
    taps.reserve(8);
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i)
                taps.push_back({{b[0] + i, b[1] + j, b[2] + k},
                                0,
                                (i ? f[0] : 1 - f[0]) * (j ? f[1] : 1 - f[1]) *
                                    (k ? f[2] : 1 - f[2])});
    return taps;
}

TapList bicubic_bspline_taps(Vec2 st) { return separable_taps(KernelSpec::bspline(), st); }
TapList tricubic_bspline_taps(Vec3 p) { return separable_taps(KernelSpec::bspline(), p); }
TapList bicubic_keys_taps(Vec2 st, double a) { return separable_taps(KernelSpec::keys(a), st); }
TapList gaussian_window_taps(Vec2 st, double sigma, double radius) {
    return separable_taps(KernelSpec::gaussian(sigma, radius), st);
}

Texel filter_bilinear(const TextureGrid &tex, const FilterQuery2D &q, FetchCounter &counter) {
    return apply_taps(tex, bilinear_taps(q.st), counter);
}
Texel filter_trilinear(const TextureGrid &tex, const FilterQuery3D &q, FetchCounter &counter) {
    return apply_taps(tex, trilinear_taps(q.p), counter);
}
Texel filter_bicubic_bspline(const TextureGrid &tex, const FilterQuery2D &q,
                             FetchCounter &counter) {
    return apply_taps(tex, bicubic_bspline_taps(q.st), counter);
}
Texel filter_tricubic_bspline(const TextureGrid &tex, const FilterQuery3D &q,
                              FetchCounter &counter) {
    return apply_taps(tex, tricubic_bspline_taps(q.p), counter);
}
Texel filter_bicubic_keys(const TextureGrid &tex, const FilterQuery2D &q, double a,
                          FetchCounter &counter) {
    return apply_taps(tex, bicubic_keys_taps(q.st, a), counter);
}
Texel filter_gaussian_window(const TextureGrid &tex, const FilterQuery2D &q, double sigma,
                             double radius, FetchCounter &counter) {
    return apply_taps(tex, gaussian_window_taps(q.st, sigma, radius), counter);
}

const std::array<float, kEwaLutSize> &ewa_lut() {
    static const std::array<float, kEwaLutSize> lut = [] {
        std::array<float, kEwaLutSize> t{};
        for (int i = 0; i < kEwaLutSize; ++i)
            t[i] = float(std::exp(-2.0 * double(i) / kEwaLutSize));
        return t;
    }();
    return lut;
}

double ewa_weight(double r2) {
    int index = std::min<int>(int(r2 * kEwaLutSize), kEwaLutSize - 1);
    return ewa_lut()[std::max(index, 0)];
}

bool ewa_degenerate(Vec2 dst0, Vec2 dst1) {
    return dst0[0] == 0 && dst0[1] == 0 && dst1[0] == 0 && dst1[1] == 0;
}

EwaEllipse ewa_ellipse(Vec2 st, Vec2 dst0, Vec2 dst1) {
    EwaEllipse e;
    double a = dst0[1] * dst0[1] + dst1[1] * dst1[1] + 1;
    double b = -2 * (dst0[0] * dst0[1] + dst1[0] * dst1[1]);
    double c = dst0[0] * dst0[0] + dst1[0] * dst1[0] + 1;
    double inv_f = 1 / (a * c - b * b * 0.25);
    e.a = a * inv_f;
    e.b = b * inv_f;
    e.c = c * inv_f;

    double det = -e.b * e.b + 4 * e.a * e.c;
    double inv_det = 1 / det;
    double u_sqrt = std::sqrt(std::max(0.0, det * e.c));
    double v_sqrt = std::sqrt(std::max(0.0, e.a * det));
    e.s0 = int(std::ceil(st[0] - 2 * inv_det * u_sqrt));
    e.s1 = int(std::floor(st[0] + 2 * inv_det * u_sqrt));
    e.t0 = int(std::ceil(st[1] - 2 * inv_det * v_sqrt));
    e.t1 = int(std::floor(st[1] + 2 * inv_det * v_sqrt));
    return e;
}

TapList ewa_taps(Vec2 st, Vec2 dst0, Vec2 dst1, int level) {
    if (ewa_degenerate(dst0, dst1))
        return bilinear_taps(st, level);
    EwaEllipse e = ewa_ellipse(st, dst0, dst1);
    TapList taps;
    for (int it = e.t0; it <= e.t1; ++it) {
        double tt = it - st[1];
        for (int is = e.s0; is <= e.s1; ++is) {
            double ss = is - st[0];
            double r2 = e.r2(ss, tt);
            if (r2 >= 1)
                continue;
            double w = ewa_weight(r2);
            if (w <= 0)
                continue;
            taps.push_back({{is, it, 0}, level, w});
        }
    }
    return taps;
}

namespace {

void normalize(TapList &taps, double scale = 1) {
    double sum = 0;
    for (const auto &t : taps)
        sum += t.weight;
    for (auto &t : taps)
        t.weight = t.weight / sum * scale;
}

} // namespace

double ewa_lod(const FilterQuery2D &q, int num_levels) {
    double max_lod = num_levels - 1;
    AnisoLod l = compute_aniso_lod({1, 1}, {q.dst0[0], q.dst0[1], q.dst1[0], q.dst1[1]},
                                   -q.mip_bias, max_lod - q.mip_bias);
    return l.lod + q.mip_bias;
}

namespace {

TapList ewa_level_taps(const FilterQuery2D &q, int level, double scale) {
    Vec2 st{level_coordinate(q.st[0], level), level_coordinate(q.st[1], level)};
    double k = std::ldexp(1.0, -level);
    TapList taps = ewa_taps(st, {q.dst0[0] * k, q.dst0[1] * k}, {q.dst1[0] * k, q.dst1[1] * k},
                            level);
    normalize(taps, scale);
    return taps;
}

} // namespace

TapList ewa_mip_taps(const FilterQuery2D &q, int num_levels) {
    double lod = ewa_lod(q, num_levels);
    int lo = int(std::floor(lod));
    double frac = lod - lo;
    TapList taps = ewa_level_taps(q, lo, 1 - frac);
    if (frac > 0 && lo + 1 < num_levels) {
        TapList hi = ewa_level_taps(q, lo + 1, frac);
        taps.insert(taps.end(), hi.begin(), hi.end());
    }
    return taps;
}

Texel filter_ewa(const TextureGrid &tex, const FilterQuery2D &q, FetchCounter &counter) {
    TapList taps = ewa_taps(q.st, q.dst0, q.dst1);
    normalize(taps);
    return apply_taps(tex, taps, counter);
}

Texel filter_ewa(const MipPyramid &pyramid, const FilterQuery2D &q, FetchCounter &counter) {
    return apply_taps(pyramid, ewa_mip_taps(q, pyramid.num_levels()), counter);
}

AnisoLod compute_aniso_lod(std::array<int, 2> dims, std::array<double, 4> grads, double min_lod,
                           double max_lod, double max_aniso, double u) {
    double dudx = dims[0] * grads[0];
    double dvdx = dims[1] * grads[1];
    double dudy = dims[0] * grads[2];
    double dvdy = dims[1] * grads[3];

    Vec2 max_axis{dudy, dvdy};
    Vec2 min_axis{dudx, dvdx};
    auto dot = [](Vec2 v) { return v[0] * v[0] + v[1] * v[1]; };
    if (dot(min_axis) > dot(max_axis))
        std::swap(min_axis, max_axis);

    AnisoLod out;
    out.minor_length = std::sqrt(dot(min_axis));
    out.major_length = std::sqrt(dot(max_axis));
    out.major_axis = max_axis;
    if (out.minor_length > 0 && out.minor_length * max_aniso < out.major_length)
        out.minor_length *= out.major_length / (out.minor_length * max_aniso);
    // log2(0) is -inf, which the clamp maps to min_lod.
    out.lod = std::clamp(std::log2(out.minor_length) + (u - 0.5), min_lod, max_lod);
    return out;
}

double isotropic_lod(const FilterQuery2D &q, int num_levels) {
    double l0 = std::hypot(q.dst0[0], q.dst0[1]);
    double l1 = std::hypot(q.dst1[0], q.dst1[1]);
    return std::clamp(std::log2(std::max(l0, l1)) + q.mip_bias, 0.0, double(num_levels - 1));
}

TapList trilinear_mip_taps(Vec2 st, double lod, int num_levels) {
    lod = std::clamp(lod, 0.0, double(num_levels - 1));
    int lo = int(std::floor(lod));
    int hi = std::min(lo + 1, num_levels - 1);
    double frac = lod - lo;
    TapList taps = bilinear_taps({level_coordinate(st[0], lo), level_coordinate(st[1], lo)}, lo);
    TapList upper = bilinear_taps({level_coordinate(st[0], hi), level_coordinate(st[1], hi)}, hi);
    for (auto &t : taps)
        t.weight *= 1 - frac;
    for (auto &t : upper)
        t.weight *= frac;
    taps.insert(taps.end(), upper.begin(), upper.end());
    return taps;
}

Texel filter_trilinear_mip(const MipPyramid &pyramid, const FilterQuery2D &q,
                           FetchCounter &counter) {
    return filter_trilinear_mip(pyramid, q.st, isotropic_lod(q, pyramid.num_levels()), counter);
}

Texel filter_trilinear_mip(const MipPyramid &pyramid, Vec2 st, double lod,
                           FetchCounter &counter) {
    return apply_taps(pyramid, trilinear_mip_taps(st, lod, pyramid.num_levels()), counter);
}

Texel blend_weighted(std::span<const Texel> values, std::span<const double> weights) {
    if (values.size() != weights.size() || values.empty())
        throw ParameterError("blend: values and weights must be non-empty and equally long");
    double sum = 0;
    for (double w : weights) {
        if (!(w >= 0))
            throw ParameterError("blend: weights must be non-negative");
        sum += w;
    }
    if (sum <= 0)
        throw ParameterError("blend: weights sum to zero");
    Texel out;
    for (std::size_t i = 0; i < values.size(); ++i)
        out += (weights[i] / sum) * values[i];
    return out;
}

} // namespace stochtex
