// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/stoch_filters.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stochtex {

namespace {

// Sample one axis of a linear interpolation at `pos`; returns the chosen
// integer coordinate and updates xi.
int lerp_axis(double pos, double &xi) {
    double f = std::floor(pos);
    ReuseResult r = sample_reuse(xi, pos - f);
    xi = r.xi;
    return int(f) + (r.accepted ? 1 : 0);
}

// Cubic B-spline weights for texels at offsets -1..2 of a lookup with
// fractional position t.
std::array<double, 4> bspline_weights(double t) {
    double t2 = t * t;
    return {(1.0 / 6) * (-t * t2 + 3 * t2 - 3 * t + 1), (1.0 / 6) * (3 * t * t2 - 6 * t2 + 4),
            (1.0 / 6) * (-3 * t * t2 + 3 * t2 + 3 * t + 1), (1.0 / 6) * t * t2};
}

int bspline_axis(double pos, double &xi) {
    double f = std::floor(pos);
    auto w = bspline_weights(pos - f);
    WeightedReservoir r;
    for (int i = 0; i < 4; ++i)
        r.add(i, w[i], xi);
    return int(f) - 1 + r.selected();
}

} // namespace

CoordSample stoch_bilinear(Vec2 st, double xi) {
    int s = lerp_axis(st[0], xi);
    int t = lerp_axis(st[1], xi);
    return {{s, t, 0}, xi};
}

CoordSample stoch_trilinear(Vec3 p, double xi) {
    int x = lerp_axis(p[0], xi);
    int y = lerp_axis(p[1], xi);
    int z = lerp_axis(p[2], xi);
    return {{x, y, z}, xi};
}

CoordSample stoch_bicubic_bspline(Vec2 st, double xi) {
    int s = bspline_axis(st[0], xi);
    int t = bspline_axis(st[1], xi);
    return {{s, t, 0}, xi};
}

CoordSample stoch_tricubic_bspline(Vec3 p, double xi) {
    int x = bspline_axis(p[0], xi);
    int y = bspline_axis(p[1], xi);
    int z = bspline_axis(p[2], xi);
    return {{x, y, z}, xi};
}

TapSet stoch_bicubic_keys_taps(Vec2 st, double xi, double a) {
    KernelSpec k = KernelSpec::keys(a);
    double fs = std::floor(st[0]), ft = std::floor(st[1]);
    double ds = st[0] - fs, dt = st[1] - ft;
    WeightedReservoir pos, neg;
    Coord pos_coord, neg_coord;
    for (int dy = -1; dy <= 2; ++dy) {
        double wy = kernel_eval(k, dt - dy);
        for (int dx = -1; dx <= 2; ++dx) {
            double w = wy * kernel_eval(k, ds - dx);
            Coord c{int(fs) + dx, int(ft) + dy, 0};
            if (w < 0) {
                if (neg.add(0, -w, xi))
                    neg_coord = c;
            } else if (pos.add(0, w, xi)) {
                pos_coord = c;
            }
        }
    }
    TapSet out;
    out.push({pos_coord, 0, pos.total()});
    // The fractional offset can be such that no weight is negative.
    if (!neg.empty())
        out.push({neg_coord, 0, -neg.total()});
    return out;
}

CoordSample stoch_ewa(Vec2 st, Vec2 dst0, Vec2 dst1, double xi) {
    if (ewa_degenerate(dst0, dst1))
        return stoch_bilinear(st, xi);
    EwaEllipse e = ewa_ellipse(st, dst0, dst1);
    WeightedReservoir r;
    Coord chosen{int(std::lround(st[0])), int(std::lround(st[1])), 0};
    for (int it = e.t0; it <= e.t1; ++it) {
        double tt = it - st[1];
        for (int is = e.s0; is <= e.s1; ++is) {
            double ss = is - st[0];
            double r2 = e.r2(ss, tt);
            if (r2 >= 1)
                continue;
            if (r.add(0, ewa_weight(r2), xi))
                chosen = {is, it, 0};
        }
    }
    return {chosen, xi};
}

LevelSample stoch_mip_level(double lod, double xi, int min_level, int max_level) {
    if (max_level < min_level)
        throw ParameterError("stoch_mip_level: empty level range");
    if (!(lod > min_level))
        return {min_level, xi};
    if (!(lod < max_level))
        return {max_level, xi};
    double lo = std::floor(lod);
    ReuseResult r = sample_reuse(xi, lod - lo);
    return {int(lo) + (r.accepted ? 1 : 0), r.xi};
}

TapSet stoch_ewa_mip_taps(const FilterQuery2D &q, int num_levels, double xi) {
    LevelSample l = stoch_mip_level(ewa_lod(q, num_levels), xi, 0, num_levels - 1);
    Vec2 st{level_coordinate(q.st[0], l.level), level_coordinate(q.st[1], l.level)};
    double k = std::ldexp(1.0, -l.level);
    CoordSample c =
        stoch_ewa(st, {q.dst0[0] * k, q.dst0[1] * k}, {q.dst1[0] * k, q.dst1[1] * k}, l.xi);
    TapSet out;
    out.push({c.coord, l.level, 1});
    return out;
}

TapSet stoch_trilinear_mip_taps(Vec2 st, double lod, int num_levels, double xi) {
    LevelSample l = stoch_mip_level(lod, xi, 0, num_levels - 1);
    CoordSample c =
        stoch_bilinear({level_coordinate(st[0], l.level), level_coordinate(st[1], l.level)}, l.xi);
    TapSet out;
    out.push({c.coord, l.level, 1});
    return out;
}

Vec2 box_muller(double xi1, double xi2) {
    // 1 - xi1 lies in (0,1], keeping the logarithm finite.
    double mag = std::sqrt(-2.0 * std::log(1.0 - xi1));
    double phi = 2 * std::numbers::pi * xi2;
    return {mag * std::cos(phi), mag * std::sin(phi)};
}

Coord fis_gaussian(Vec2 st, double sigma, double xi1, double xi2) {
    if (!(sigma >= 0))
        throw ParameterError("fis_gaussian: sigma must be non-negative");
    Vec2 n = box_muller(xi1, xi2);
    return {int(std::floor(st[0] + sigma * n[0] + 0.5)), int(std::floor(st[1] + sigma * n[1] + 0.5)),
            0};
}

namespace {

// Mass of N(s, sigma^2) over [k - 0.5, k + 0.5).
double gaussian_cell(double s, double sigma, int k) {
    double inv = 1 / (sigma * std::numbers::sqrt2);
    return 0.5 * (std::erf((k + 0.5 - s) * inv) - std::erf((k - 0.5 - s) * inv));
}

} // namespace

TapList fis_gaussian_taps(Vec2 st, double sigma) {
    if (!(sigma > 0))
        throw ParameterError("fis_gaussian_taps: sigma must be positive");
    int extent = int(std::ceil(6 * sigma)) + 1;
    int cs = int(std::floor(st[0] + 0.5)), ct = int(std::floor(st[1] + 0.5));
    TapList taps;
    for (int j = ct - extent; j <= ct + extent; ++j) {
        double wy = gaussian_cell(st[1], sigma, j);
        for (int i = cs - extent; i <= cs + extent; ++i) {
            double w = wy * gaussian_cell(st[0], sigma, i);
            if (w > 0)
                taps.push_back({{i, j, 0}, 0, w});
        }
    }
    return taps;
}

int fis_bspline_axis(double s, int n, std::span<const double> xis) {
    if (n < 1 || int(xis.size()) < n)
        throw ParameterError("fis_bspline: need n >= 1 and n uniforms");
    double offset = -0.5 * n;
    for (int k = 0; k < n; ++k)
        offset += xis[k];
    return int(std::floor(s + offset + 0.5));
}

Coord fis_bspline(Vec2 st, int n, std::span<const double> xis) {
    if (n < 1 || int(xis.size()) < 2 * n)
        throw ParameterError("fis_bspline: need 2n uniforms for a 2D lookup");
    return {fis_bspline_axis(st[0], n, xis.subspan(0, n)),
            fis_bspline_axis(st[1], n, xis.subspan(n, n)), 0};
}

Coord fis_bspline(Vec3 p, int n, std::span<const double> xis) {
    if (n < 1 || int(xis.size()) < 3 * n)
        throw ParameterError("fis_bspline: need 3n uniforms for a 3D lookup");
    return {fis_bspline_axis(p[0], n, xis.subspan(0, n)),
            fis_bspline_axis(p[1], n, xis.subspan(n, n)),
            fis_bspline_axis(p[2], n, xis.subspan(2 * n, n))};
}

CoordSample discrete_gaussian_sample(Vec2 st, double sigma, double xi, double radius) {
    KernelSpec k = KernelSpec::gaussian(sigma, radius);
    double fs = std::floor(st[0]), ft = std::floor(st[1]);
    KernelWindow ws = kernel_weights_window(k, st[0] - fs);
    KernelWindow wt = kernel_weights_window(k, st[1] - ft);
    WeightedReservoir r;
    Coord chosen{int(fs), int(ft), 0};
    for (std::size_t j = 0; j < wt.weights.size(); ++j)
        for (std::size_t i = 0; i < ws.weights.size(); ++i)
            if (r.add(0, ws.weights[i] * wt.weights[j], xi))
                chosen = {int(fs) + ws.first_offset + int(i), int(ft) + wt.first_offset + int(j), 0};
    if (r.empty())
        throw ParameterError("discrete_gaussian_sample: window has no positive weight");
    return {chosen, xi};
}

DiscreteSampleResult stoch_blend(std::span<const double> weights, double xi) {
    return sample_discrete(weights, xi);
}

} // namespace stochtex
