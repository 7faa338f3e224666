// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/filter_dispatch.h>

#include <array>
#include <string>

namespace stochtex {

namespace {

struct KindName {
    FilterKind kind;
    std::string_view name;
};

constexpr std::array<KindName, 8> kKindNames{{
    {FilterKind::Bilinear, "bilinear"},
    {FilterKind::Trilinear, "trilinear"},
    {FilterKind::BicubicBSpline, "bicubic-bspline"},
    {FilterKind::TricubicBSpline, "tricubic-bspline"},
    {FilterKind::BicubicKeys, "bicubic-keys"},
    {FilterKind::Gaussian, "gaussian"},
    {FilterKind::Ewa, "ewa"},
    {FilterKind::TrilinearMip, "trilinear-mip"},
}};

[[noreturn]] void unsupported(const FilterSettings &f, Estimator e) {
    throw ParameterError("no " + std::string(to_string(e)) + " estimator for filter " +
                         std::string(to_string(f.kind)));
}

} // namespace

std::string_view to_string(FilterKind kind) {
    for (const auto &k : kKindNames)
        if (k.kind == kind)
            return k.name;
    return "unknown";
}

std::string_view to_string(Estimator estimator) {
    switch (estimator) {
    case Estimator::Deterministic:
        return "det";
    case Estimator::Stochastic:
        return "stoch";
    case Estimator::Fis:
        return "fis";
    }
    return "unknown";
}

FilterKind parse_filter_kind(std::string_view name) {
    for (const auto &k : kKindNames)
        if (k.name == name)
            return k.kind;
    throw ParameterError("unknown filter '" + std::string(name) + "'");
}

Estimator parse_estimator(std::string_view name) {
    if (name == "det")
        return Estimator::Deterministic;
    if (name == "stoch")
        return Estimator::Stochastic;
    if (name == "fis")
        return Estimator::Fis;
    throw ParameterError("unknown estimator '" + std::string(name) + "'");
}

bool is_volume_filter(FilterKind kind) {
    return kind == FilterKind::Trilinear || kind == FilterKind::TricubicBSpline;
}

bool needs_pyramid(FilterKind kind) {
    return kind == FilterKind::Ewa || kind == FilterKind::TrilinearMip;
}

int uniforms_per_lookup(const FilterSettings &f, Estimator e) {
    switch (e) {
    case Estimator::Deterministic:
        return 0;
    case Estimator::Stochastic:
        return 1;
    case Estimator::Fis:
        switch (f.kind) {
        case FilterKind::Bilinear:
            return 2;
        case FilterKind::Trilinear:
            return 3;
        case FilterKind::BicubicBSpline:
            return 6;
        case FilterKind::TricubicBSpline:
            return 9;
        case FilterKind::Gaussian:
            return 2;
        default:
            unsupported(f, e);
        }
    }
    return 0;
}

TapList reference_taps(const FilterSettings &f, Estimator e, const FilterQuery2D &q,
                       int num_levels) {
    if (e == Estimator::Fis && !(f.kind == FilterKind::Bilinear ||
                                 f.kind == FilterKind::BicubicBSpline ||
                                 f.kind == FilterKind::Gaussian))
        unsupported(f, e);
    switch (f.kind) {
    case FilterKind::Bilinear:
        return bilinear_taps(q.st);
    case FilterKind::BicubicBSpline:
        return bicubic_bspline_taps(q.st);
    case FilterKind::BicubicKeys:
        return bicubic_keys_taps(q.st, f.keys_a);
    case FilterKind::Gaussian:
        if (e == Estimator::Fis)
            return fis_gaussian_taps(q.st, f.sigma);
        return gaussian_window_taps(q.st, f.sigma, f.radius);
    case FilterKind::Ewa:
        return ewa_mip_taps(q, num_levels);
    case FilterKind::TrilinearMip:
        return trilinear_mip_taps(q.st, isotropic_lod(q, num_levels), num_levels);
    case FilterKind::Trilinear:
    case FilterKind::TricubicBSpline:
        break;
    }
    throw ParameterError("filter " + std::string(to_string(f.kind)) + " needs a 3D query");
}

TapList reference_taps(const FilterSettings &f, Estimator, const FilterQuery3D &q) {
    switch (f.kind) {
    case FilterKind::Trilinear:
        return trilinear_taps(q.p);
    case FilterKind::TricubicBSpline:
        return tricubic_bspline_taps(q.p);
    default:
        throw ParameterError("filter " + std::string(to_string(f.kind)) + " needs a 2D query");
    }
}

namespace {

TapSet single(Coord c, int level = 0) {
    TapSet t;
    t.push({c, level, 1});
    return t;
}

} // namespace

TapSet stochastic_taps(const FilterSettings &f, Estimator e, const FilterQuery2D &q,
                       int num_levels, RngStream &rng) {
    if (e == Estimator::Deterministic)
        throw ParameterError("stochastic_taps: deterministic estimator requested");
    if (e == Estimator::Fis) {
        std::array<double, 6> u{};
        int n = uniforms_per_lookup(f, e);
        for (int i = 0; i < n; ++i)
            u[i] = rng.uniform();
        switch (f.kind) {
        case FilterKind::Bilinear:
            return single(fis_bspline(q.st, 1, std::span<const double>(u.data(), 2)));
        case FilterKind::BicubicBSpline:
            return single(fis_bspline(q.st, 3, std::span<const double>(u.data(), 6)));
        case FilterKind::Gaussian:
            return single(fis_gaussian(q.st, f.sigma, u[0], u[1]));
        default:
            unsupported(f, e);
        }
    }
    double xi = rng.uniform();
    switch (f.kind) {
    case FilterKind::Bilinear:
        return single(stoch_bilinear(q.st, xi).coord);
    case FilterKind::BicubicBSpline:
        return single(stoch_bicubic_bspline(q.st, xi).coord);
    case FilterKind::BicubicKeys:
        return stoch_bicubic_keys_taps(q.st, xi, f.keys_a);
    case FilterKind::Gaussian:
        return single(discrete_gaussian_sample(q.st, f.sigma, xi, f.radius).coord);
    case FilterKind::Ewa:
        return stoch_ewa_mip_taps(q, num_levels, xi);
    case FilterKind::TrilinearMip:
        return stoch_trilinear_mip_taps(q.st, isotropic_lod(q, num_levels), num_levels, xi);
    case FilterKind::Trilinear:
    case FilterKind::TricubicBSpline:
        break;
    }
    throw ParameterError("filter " + std::string(to_string(f.kind)) + " needs a 3D query");
}

TapSet stochastic_taps(const FilterSettings &f, Estimator e, const FilterQuery3D &q,
                       RngStream &rng) {
    if (!is_volume_filter(f.kind))
        throw ParameterError("filter " + std::string(to_string(f.kind)) + " needs a 2D query");
    if (e == Estimator::Deterministic)
        throw ParameterError("stochastic_taps: deterministic estimator requested");
    bool cubic = f.kind == FilterKind::TricubicBSpline;
    if (e == Estimator::Fis) {
        std::array<double, 9> u{};
        int n = cubic ? 3 : 1;
        for (int i = 0; i < 3 * n; ++i)
            u[i] = rng.uniform();
        return single(fis_bspline(q.p, n, std::span<const double>(u.data(), 3 * n)));
    }
    double xi = rng.uniform();
    return single(cubic ? stoch_tricubic_bspline(q.p, xi).coord : stoch_trilinear(q.p, xi).coord);
}

int deterministic_tap_count(FilterKind kind, const FilterSettings &f) {
    switch (kind) {
    case FilterKind::Bilinear:
        return 4;
    case FilterKind::Trilinear:
    case FilterKind::TrilinearMip:
        return 8;
    case FilterKind::BicubicBSpline:
    case FilterKind::BicubicKeys:
        return 16;
    case FilterKind::TricubicBSpline:
        return 64;
    case FilterKind::Gaussian: {
        int n = kernel_min_taps(KernelSpec::gaussian(f.sigma, f.radius));
        return n * n;
    }
    case FilterKind::Ewa:
        return -1;
    }
    return -1;
}

} // namespace stochtex
