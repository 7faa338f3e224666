// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/kernels.h>

#include <cmath>
#include <numbers>

namespace stochtex {

std::string_view to_string(KernelFamily family) {
    switch (family) {
    case KernelFamily::Box:
        return "box";
    case KernelFamily::Tent:
        return "tent";
    case KernelFamily::KeysCubic:
        return "keys";
    case KernelFamily::CubicBSpline:
        return "bspline";
    case KernelFamily::Lanczos:
        return "lanczos";
    case KernelFamily::Gaussian:
        return "gaussian";
    }
    return "unknown";
}

void validate(const KernelSpec &spec) {
    switch (spec.family) {
    case KernelFamily::KeysCubic:
        if (!std::isfinite(spec.a))
            throw ParameterError("keys cubic: parameter a must be finite");
        break;
    case KernelFamily::Lanczos:
        if (spec.lobes < 1)
            throw ParameterError("lanczos: lobe count must be >= 1");
        break;
    case KernelFamily::Gaussian:
        if (!(spec.sigma > 0) || !std::isfinite(spec.sigma))
            throw ParameterError("gaussian: sigma must be positive");
        if (!std::isfinite(spec.radius) || spec.radius < 0)
            throw ParameterError("gaussian: radius must be finite and non-negative");
        break;
    default:
        break;
    }
}

double kernel_support(const KernelSpec &spec) {
    switch (spec.family) {
    case KernelFamily::Box:
        return 0.5;
    case KernelFamily::Tent:
        return 1;
    case KernelFamily::KeysCubic:
    case KernelFamily::CubicBSpline:
        return 2;
    case KernelFamily::Lanczos:
        return spec.lobes;
    case KernelFamily::Gaussian:
        return spec.radius > 0 ? spec.radius : 3 * spec.sigma;
    }
    return 0;
}

int kernel_min_taps(const KernelSpec &spec) {
    return 2 * static_cast<int>(std::ceil(kernel_support(spec)));
}

namespace {

double sinc_pi(double x) {
    if (x == 0)
        return 1;
    double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

} // namespace

double kernel_eval(const KernelSpec &spec, double t) {
    validate(spec);
    double at = std::abs(t);
    switch (spec.family) {
    case KernelFamily::Box:
        return at < 0.5 ? 1 : 0;
    case KernelFamily::Tent:
        return at < 1 ? 1 - at : 0;
    case KernelFamily::KeysCubic: {
        double a = spec.a;
        if (at < 1)
            return ((a + 2) * at - (a + 3)) * at * at + 1;
        // a t^3 - 5a t^2 + 8a t - 4a, factored so that t = 1 and t = 2 give 0 exactly.
        if (at < 2)
            return a * (at - 1) * (at - 2) * (at - 2);
        return 0;
    }
    case KernelFamily::CubicBSpline:
        if (at <= 1)
            return (4 - 3 * at * at * (2 - at)) / 6;
        if (at < 2)
            return (2 - at) * (2 - at) * (2 - at) / 6;
        return 0;
    case KernelFamily::Lanczos:
        if (at >= spec.lobes)
            return 0;
        return sinc_pi(at) * sinc_pi(at / spec.lobes);
    case KernelFamily::Gaussian: {
        if (at >= kernel_support(spec))
            return 0;
        double s = spec.sigma;
        return std::exp(-0.5 * t * t / (s * s)) / (s * std::sqrt(2 * std::numbers::pi));
    }
    }
    return 0;
}

std::vector<double> KernelWindow::normalized() const {
    std::vector<double> out(weights);
    for (double &w : out)
        w /= sum;
    return out;
}

KernelWindow kernel_weights_window(const KernelSpec &spec, double frac, int taps) {
    validate(spec);
    if (taps < kernel_min_taps(spec))
        throw ParameterError("kernel window: " + std::to_string(taps) +
                             " taps do not cover the " + std::string(to_string(spec.family)) +
                             " support");
    KernelWindow win;
    win.first_offset = -((taps - 1) / 2);
    win.weights.resize(taps);
    for (int i = 0; i < taps; ++i) {
        double w = kernel_eval(spec, frac - (win.first_offset + i));
        win.weights[i] = w;
        win.sum += w;
    }
    return win;
}

KernelWindow kernel_weights_window(const KernelSpec &spec, double frac) {
    validate(spec);
    return kernel_weights_window(spec, frac, kernel_min_taps(spec));
}

} // namespace stochtex
