// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <stochtex/common.h>

#include <string_view>
#include <vector>

namespace stochtex {

enum class KernelFamily { Box, Tent, KeysCubic, CubicBSpline, Lanczos, Gaussian };

std::string_view to_string(KernelFamily family);

// A 1D reconstruction kernel. Only the fields relevant to `family` are read:
// `a` for KeysCubic, `lobes` for Lanczos, `sigma` and `radius` for Gaussian.
// A Gaussian radius <= 0 selects the default truncation of 3 sigma.
struct KernelSpec {
    KernelFamily family = KernelFamily::Tent;
    double a = -0.5;
    int lobes = 2;
    double sigma = 0.5;
    double radius = 0;

    static KernelSpec box() { return {KernelFamily::Box}; }
    static KernelSpec tent() { return {KernelFamily::Tent}; }
    static KernelSpec keys(double a = -0.5) { return {KernelFamily::KeysCubic, a}; }
    static KernelSpec bspline() { return {KernelFamily::CubicBSpline}; }
    static KernelSpec lanczos(int lobes = 2) {
        KernelSpec k{KernelFamily::Lanczos};
        k.lobes = lobes;
        return k;
    }
    static KernelSpec gaussian(double sigma, double radius = 0) {
        KernelSpec k{KernelFamily::Gaussian};
        k.sigma = sigma;
        k.radius = radius;
        return k;
    }
};

// Throws ParameterError unless the kernel parameters are usable.
void validate(const KernelSpec &spec);

// Half-width of the kernel's support in texels. For the Gaussian this is the
// truncation radius.
double kernel_support(const KernelSpec &spec);

// Smallest window that covers the support around floor(s): 2 * ceil(support).
int kernel_min_taps(const KernelSpec &spec);

// Kernel value at offset t (texels). Zero outside the half-open support.
// The Gaussian is the unit-mass density of N(0, sigma^2), truncated at radius.
double kernel_eval(const KernelSpec &spec, double t);

// Weights for `taps` consecutive texels around a lookup point with
// fractional position `frac` in [0,1). Texel i sits at integer offset
// first_offset + i from floor(s); its weight is K(frac - offset).
struct KernelWindow {
    int first_offset = 0;
    std::vector<double> weights;
    double sum = 0;

    // Weights divided by their sum.
    std::vector<double> normalized() const;
};

KernelWindow kernel_weights_window(const KernelSpec &spec, double frac, int taps);

// Same, with taps = kernel_min_taps(spec).
KernelWindow kernel_weights_window(const KernelSpec &spec, double frac);

} // namespace stochtex
