// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

// Uniform front end over the deterministic and stochastic filters, used by
// the shading comparisons, the DCT backend and the command-line tool.

#include <stochtex/rng.h>
#include <stochtex/stoch_filters.h>

#include <string>
#include <string_view>

namespace stochtex {

enum class FilterKind {
    Bilinear,
    Trilinear,
    BicubicBSpline,
    TricubicBSpline,
    BicubicKeys,
    Gaussian,
    Ewa,
    TrilinearMip,
};

enum class Estimator { Deterministic, Stochastic, Fis };

std::string_view to_string(FilterKind kind);
std::string_view to_string(Estimator estimator);
FilterKind parse_filter_kind(std::string_view name);
Estimator parse_estimator(std::string_view name);

// True for filters over 3D grids (trilinear, tricubic).
bool is_volume_filter(FilterKind kind);
// True for filters that read a MIP pyramid.
bool needs_pyramid(FilterKind kind);

struct FilterSettings {
    FilterKind kind = FilterKind::Bilinear;
    double keys_a = -0.5;
    double sigma = 0.5;
    // Gaussian truncation radius; <= 0 means 3 sigma.
    double radius = 0;
};

// Number of uniforms an estimator consumes per lookup.
int uniforms_per_lookup(const FilterSettings &f, Estimator e);

// The filter an estimator converges to, as normalized weighted taps. For
// Deterministic and Stochastic this is the discrete filter itself; for Fis
// it is the realized filter (the sampled density convolved with a box).
TapList reference_taps(const FilterSettings &f, Estimator e, const FilterQuery2D &q,
                       int num_levels);
TapList reference_taps(const FilterSettings &f, Estimator e, const FilterQuery3D &q);

// One or two taps drawn with fresh uniforms from rng. Throws ParameterError
// for combinations that have no estimator (e.g. Fis with EWA).
TapSet stochastic_taps(const FilterSettings &f, Estimator e, const FilterQuery2D &q,
                       int num_levels, RngStream &rng);
TapSet stochastic_taps(const FilterSettings &f, Estimator e, const FilterQuery3D &q,
                       RngStream &rng);

// Number of texel fetches a deterministic lookup performs (constant for
// window filters; EWA depends on the query).
int deterministic_tap_count(FilterKind kind, const FilterSettings &f = {});

} // namespace stochtex
