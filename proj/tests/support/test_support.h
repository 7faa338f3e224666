// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

// Shared helpers for the test binaries: random inputs, chi-square
// goodness-of-fit, and oracles written independently of the library.

#include <stochtex/texture.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <map>
#include <random>
#include <vector>

namespace stochtex::testing {

inline TextureGrid random_texture(std::mt19937_64 &gen, int w, int h, int channels = 1) {
    std::uniform_real_distribution<float> u(0.f, 1.f);
    std::vector<float> data(std::size_t(w) * h * channels);
    for (float &v : data)
        v = u(gen);
    return TextureGrid(w, h, channels, std::move(data));
}

inline TextureGrid random_volume(std::mt19937_64 &gen, int w, int h, int d, int channels = 1) {
    std::uniform_real_distribution<float> u(0.f, 1.f);
    std::vector<float> data(std::size_t(w) * h * d * channels);
    for (float &v : data)
        v = u(gen);
    return TextureGrid(w, h, d, channels, std::move(data));
}

struct ChiSquare {
    double statistic = 0;
    int dof = 0;
    double critical = 0;
    // Observations landed in a zero-probability bin.
    bool impossible = false;
    bool pass() const { return !impossible && dof > 0 && statistic <= critical; }
};

// Pearson test of `counts` (n draws in total) against probabilities
// `probs`. Adjacent bins are merged until each expected count is >= 5.
inline ChiSquare chi_square(const std::vector<double> &counts, const std::vector<double> &probs,
                            double n, double alpha = 0.01) {
    ChiSquare r;
    std::vector<std::pair<double, double>> bins; // (observed, expected)
    double obs = 0, exp = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0) {
            if (counts[i] > 0)
                r.impossible = true;
            continue;
        }
        obs += counts[i];
        exp += probs[i] * n;
        if (exp >= 5) {
            bins.push_back({obs, exp});
            obs = exp = 0;
        }
    }
    if (exp > 0) {
        if (bins.empty())
            bins.push_back({obs, exp});
        else {
            bins.back().first += obs;
            bins.back().second += exp;
        }
    }
    for (auto [o, e] : bins)
        r.statistic += (o - e) * (o - e) / e;
    r.dof = int(bins.size()) - 1;
    if (r.dof > 0) {
        boost::math::chi_squared dist(r.dof);
        r.critical = boost::math::quantile(boost::math::complement(dist, alpha));
    }
    return r;
}

// Same, for outcomes keyed by an ordered value.
template <class Key>
ChiSquare chi_square(const std::map<Key, double> &counts, const std::map<Key, double> &probs,
                     double n, double alpha = 0.01) {
    std::vector<double> c, p;
    for (auto [k, prob] : probs) {
        p.push_back(prob);
        auto it = counts.find(k);
        c.push_back(it == counts.end() ? 0 : it->second);
    }
    ChiSquare r = chi_square(c, p, n, alpha);
    for (auto [k, cnt] : counts)
        if (cnt > 0 && !probs.count(k))
            r.impossible = true;
    return r;
}

// Cardinal B-spline of order k (degree k - 1) on knots 0..k by the Cox-de
// Boor recursion.
inline double cox_de_boor(int i, int k, double x) {
    if (k == 1)
        return (x >= i && x < i + 1) ? 1.0 : 0.0;
    return (x - i) / (k - 1) * cox_de_boor(i, k - 1, x) +
           (i + k - x) / (k - 1) * cox_de_boor(i + 1, k - 1, x);
}

// Centered B-spline of order k, support (-k/2, k/2).
inline double centered_bspline(int k, double t) { return cox_de_boor(0, k, t + 0.5 * k); }

// Probability that N(s, sigma^2) falls in [k - 0.5, k + 0.5).
inline double normal_cell(double s, double sigma, int k) {
    double a = (k - 0.5 - s) / sigma, b = (k + 0.5 - s) / sigma;
    return 0.5 * (std::erfc(a / std::sqrt(2.0)) - std::erfc(b / std::sqrt(2.0)));
}

// Closed-form kernels, written out independently of the library.
inline double oracle_tent(double t) { return std::max(0.0, 1 - std::abs(t)); }
inline double oracle_bspline(double t) {
    t = std::abs(t);
    if (t <= 1)
        return (4 - 3 * t * t * (2 - t)) / 6;
    if (t < 2)
        return (2 - t) * (2 - t) * (2 - t) / 6;
    return 0;
}
inline double oracle_keys(double t, double a) {
    t = std::abs(t);
    if (t <= 1)
        return (a + 2) * t * t * t - (a + 3) * t * t + 1;
    if (t < 2)
        return a * t * t * t - 5 * a * t * t + 8 * a * t - 4 * a;
    return 0;
}

// Brute-force separable filter: sum over all texels within `support` of
// k(x - s) k(y - t) tex(x, y), normalized by the weight sum.
template <class K>
double oracle_separable(const TextureGrid &tex, double s, double t, double support, K k,
                        int channel = 0) {
    double num = 0, den = 0;
    for (int y = int(std::floor(t - support)); y <= int(std::ceil(t + support)); ++y)
        for (int x = int(std::floor(s - support)); x <= int(std::ceil(s + support)); ++x) {
            double w = k(x - s) * k(y - t);
            if (w == 0)
                continue;
            int cx = std::clamp(x, 0, tex.width() - 1), cy = std::clamp(y, 0, tex.height() - 1);
            num += w * tex.at(cx, cy, channel);
            den += w;
        }
    return num / den;
}

// Passes when |mean - target| <= 4 SEM (plus a round-off allowance for
// zero-variance estimators).
struct CltCheck {
    double mean = 0, sem = 0, target = 0;
    bool pass() const { return std::abs(mean - target) <= 4 * sem + 1e-12 * (1 + std::abs(target)); }
};

template <class Draw>
CltCheck clt_check(long long n, double target, Draw &&draw) {
    double mean = 0, m2 = 0;
    for (long long i = 0; i < n; ++i) {
        double x = draw();
        double d = x - mean;
        mean += d / double(i + 1);
        m2 += d * (x - mean);
    }
    return {mean, std::sqrt(m2 / double(n - 1) / double(n)), target};
}

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
  public:
    explicit ScratchDir(const std::string &tag) {
        static std::atomic<int> serial{0};
        std::random_device rd;
        dir_ = std::filesystem::temp_directory_path() /
               ("stochtex_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(serial++));
        std::filesystem::create_directories(dir_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    ScratchDir(const ScratchDir &) = delete;
    ScratchDir &operator=(const ScratchDir &) = delete;

    std::filesystem::path path(const std::string &name) const { return dir_ / name; }
    const std::filesystem::path &dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
};

} // namespace stochtex::testing
