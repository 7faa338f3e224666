// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/filter_dispatch.h>
#include <stochtex/stoch_filters.h>

#include "test_support.h"

#include <gtest/gtest.h>

#include <tuple>

using namespace stochtex;
using namespace stochtex::testing;

namespace {

using Key = std::tuple<int, int, int, int>; // x, y, z, level

Key key(Coord c, int level = 0) { return {c.x, c.y, c.z, level}; }

std::map<Key, double> normalized(const TapList &taps) {
    std::map<Key, double> p;
    double total = 0;
    for (const auto &t : taps) {
        p[key(t.coord, t.level)] += t.weight;
        total += t.weight;
    }
    for (auto &[k, w] : p)
        w /= total;
    std::erase_if(p, [](const auto &kv) { return kv.second <= 0; });
    return p;
}

template <class Draw>
ChiSquare frequency_test(const TapList &reference, long long n, Draw &&draw) {
    std::map<Key, double> counts;
    for (long long i = 0; i < n; ++i)
        counts[draw()] += 1;
    return chi_square(counts, normalized(reference), double(n));
}

constexpr long long kDraws = 400000;

std::vector<Vec2> test_points() {
    return {{3.25, 4.6}, {0.5, 0.5}, {-1.3, 2.9}, {10.01, 7.99}, {5.0, 6.75}};
}

} // namespace

TEST(StochBilinear, MatchesBilinearWeights) {
    for (Vec2 st : test_points()) {
        RngStream rng(1);
        ChiSquare c = frequency_test(bilinear_taps(st), kDraws,
                                     [&] { return key(stoch_bilinear(st, rng.uniform()).coord); });
        EXPECT_TRUE(c.pass()) << st[0] << "," << st[1] << ": " << c.statistic;
    }
}

TEST(StochBilinear, IntegerPositionIsExact) {
    for (double xi : {0.0, 0.5, 0.9999})
        EXPECT_EQ(stoch_bilinear({4, 7}, xi).coord, (Coord{4, 7, 0}));
}

TEST(StochBilinear, ReturnedXiStaysUniform) {
    RngStream rng(2);
    std::vector<double> bins(64);
    for (long long i = 0; i < kDraws; ++i)
        bins[std::min(63, int(stoch_bilinear({2.3, 5.8}, rng.uniform()).xi * 64))] += 1;
    ChiSquare c = chi_square(bins, std::vector<double>(64, 1.0 / 64), kDraws);
    EXPECT_TRUE(c.pass()) << c.statistic;
}

TEST(StochTrilinear, MatchesTrilinearWeights) {
    Vec3 p{2.2, 3.7, 1.45};
    RngStream rng(3);
    ChiSquare c = frequency_test(trilinear_taps(p), kDraws,
                                 [&] { return key(stoch_trilinear(p, rng.uniform()).coord); });
    EXPECT_TRUE(c.pass()) << c.statistic;
}

TEST(StochBicubicBSpline, JointDistribution) {
    for (Vec2 st : test_points()) {
        RngStream rng(4);
        ChiSquare c = frequency_test(bicubic_bspline_taps(st), kDraws, [&] {
            return key(stoch_bicubic_bspline(st, rng.uniform()).coord);
        });
        EXPECT_TRUE(c.pass()) << st[0] << "," << st[1] << ": " << c.statistic;
    }
}

TEST(StochTricubicBSpline, JointDistribution) {
    Vec3 p{1.3, 4.8, 2.5};
    RngStream rng(5);
    ChiSquare c = frequency_test(tricubic_bspline_taps(p), kDraws * 2, [&] {
        return key(stoch_tricubic_bspline(p, rng.uniform()).coord);
    });
    EXPECT_TRUE(c.pass()) << c.statistic << " dof " << c.dof;
}

TEST(StochKeys, BothReservoirsAtHalfTexel) {
    TapSet t = stoch_bicubic_keys_taps({3.5, 3.5}, 0.3);
    ASSERT_EQ(t.count, 2);
    double wp = 0, wn = 0;
    for (const auto &tap : bicubic_keys_taps({3.5, 3.5}))
        (tap.weight > 0 ? wp : wn) += tap.weight;
    EXPECT_NEAR(t.taps[0].weight, wp, 1e-12);
    EXPECT_NEAR(t.taps[1].weight, wn, 1e-12);
    EXPECT_NEAR(t.taps[0].weight + t.taps[1].weight, 1.0, 1e-12);
}

TEST(StochKeys, IntegerPositionHasNoNegativeTap) {
    TapSet t = stoch_bicubic_keys_taps({3, 5}, 0.7);
    ASSERT_EQ(t.count, 1);
    EXPECT_EQ(t.taps[0].coord, (Coord{3, 5, 0}));
    EXPECT_NEAR(t.taps[0].weight, 1.0, 1e-12);
}

TEST(StochKeys, PositiveAndNegativeTapDistributions) {
    Vec2 st{6.3, 2.8};
    TapList ref = bicubic_keys_taps(st);
    TapList pos, neg;
    for (auto t : ref) {
        if (t.weight > 0)
            pos.push_back(t);
        else if (t.weight < 0) {
            t.weight = -t.weight;
            neg.push_back(t);
        }
    }
    RngStream rng(6);
    std::map<Key, double> cp, cn;
    for (long long i = 0; i < kDraws; ++i) {
        TapSet t = stoch_bicubic_keys_taps(st, rng.uniform());
        ASSERT_EQ(t.count, 2);
        cp[key(t.taps[0].coord)] += 1;
        cn[key(t.taps[1].coord)] += 1;
    }
    ChiSquare a = chi_square(cp, normalized(pos), kDraws);
    ChiSquare b = chi_square(cn, normalized(neg), kDraws);
    EXPECT_TRUE(a.pass()) << a.statistic;
    EXPECT_TRUE(b.pass()) << b.statistic;
}

TEST(FisBSpline, RealizedFilterIsBSplineOfNextOrder) {
    for (int n = 1; n <= 3; ++n) {
        for (double s : {2.0, 2.3, 2.5, 2.85}) {
            RngStream rng(7, n);
            std::map<int, double> counts, probs;
            for (int k = -4; k <= 9; ++k) {
                double p = centered_bspline(n + 1, k - s);
                if (p > 0)
                    probs[k] = p;
            }
            std::vector<double> xi(n);
            for (long long i = 0; i < kDraws; ++i) {
                for (double &x : xi)
                    x = rng.uniform();
                counts[fis_bspline_axis(s, n, xi)] += 1;
            }
            ChiSquare c = chi_square(counts, probs, kDraws);
            if (probs.size() == 1) {
                // Integer s with n = 1: every draw lands on s.
                EXPECT_FALSE(c.impossible) << "n=" << n << " s=" << s;
                continue;
            }
            EXPECT_TRUE(c.pass()) << "n=" << n << " s=" << s << ": " << c.statistic;
        }
    }
}

TEST(FisBSpline, MatchesDispatchReference) {
    FilterSettings f{FilterKind::BicubicBSpline};
    FilterQuery2D q{{4.4, 1.7}};
    TapList ref = reference_taps(f, Estimator::Fis, q, 1);
    std::map<Key, double> p = normalized(ref);
    for (auto [k, w] : p) {
        auto [x, y, z, l] = k;
        EXPECT_NEAR(w, centered_bspline(4, x - 4.4) * centered_bspline(4, y - 1.7), 1e-12);
    }
    RngStream rng(8);
    ChiSquare c = frequency_test(ref, kDraws, [&] {
        return key(stochastic_taps(f, Estimator::Fis, q, 1, rng).taps[0].coord);
    });
    EXPECT_TRUE(c.pass()) << c.statistic;
}

TEST(FisBSpline, RejectsShortUniformSpans) {
    std::vector<double> xi{0.5, 0.5};
    EXPECT_THROW(fis_bspline_axis(0.3, 3, xi), ParameterError);
    EXPECT_THROW(fis_bspline(Vec2{0.3, 0.3}, 2, xi), ParameterError);
    EXPECT_THROW(fis_bspline_axis(0.3, 0, xi), ParameterError);
}

TEST(FisGaussian, BoxMullerMoments) {
    RngStream rng(9);
    double m[2] = {}, v[2] = {}, cov = 0;
    const long long n = kDraws;
    for (long long i = 0; i < n; ++i) {
        Vec2 z = box_muller(rng.uniform(), rng.uniform());
        for (int a = 0; a < 2; ++a) {
            m[a] += z[a];
            v[a] += z[a] * z[a];
        }
        cov += z[0] * z[1];
    }
    for (int a = 0; a < 2; ++a) {
        EXPECT_NEAR(m[a] / n, 0.0, 4 / std::sqrt(double(n)));
        EXPECT_NEAR(v[a] / n, 1.0, 4 * std::sqrt(2.0 / n));
    }
    EXPECT_NEAR(cov / n, 0.0, 4 / std::sqrt(double(n)));
    EXPECT_TRUE(std::isfinite(box_muller(0.0, 0.0)[0]));
}

TEST(FisGaussian, CellsFollowNormalMass) {
    for (double sigma : {0.5, 1.3}) {
        Vec2 st{7.2, 3.65};
        RngStream rng(10);
        std::map<Key, double> probs;
        for (int y = -10; y <= 16; ++y)
            for (int x = -6; x <= 20; ++x) {
                double p = normal_cell(st[0], sigma, x) * normal_cell(st[1], sigma, y);
                if (p > 0)
                    probs[{x, y, 0, 0}] = p;
            }
        std::map<Key, double> counts;
        for (long long i = 0; i < kDraws; ++i)
            counts[key(fis_gaussian(st, sigma, rng.uniform(), rng.uniform()))] += 1;
        ChiSquare c = chi_square(counts, probs, kDraws);
        EXPECT_TRUE(c.pass()) << "sigma=" << sigma << ": " << c.statistic;

        std::map<Key, double> lib = normalized(fis_gaussian_taps(st, sigma));
        for (auto [k, p] : lib)
            EXPECT_NEAR(p, probs[k], 1e-9);
    }
}

TEST(StochEwa, MatchesEwaWeights) {
    struct Case {
        Vec2 st, d0, d1;
    };
    for (Case cs : {Case{{8.3, 9.1}, {2.5, 0.4}, {-0.3, 1.2}}, Case{{4.0, 4.0}, {1.5, 1.5}, {-1, 1}},
                    Case{{20.7, 3.2}, {6.0, 0.0}, {0.0, 0.8}}}) {
        RngStream rng(11);
        ChiSquare c = frequency_test(ewa_taps(cs.st, cs.d0, cs.d1), kDraws, [&] {
            return key(stoch_ewa(cs.st, cs.d0, cs.d1, rng.uniform()).coord);
        });
        EXPECT_TRUE(c.pass()) << c.statistic << " dof " << c.dof;
    }
}

TEST(StochEwa, DegenerateFallsBackToBilinear) {
    for (double xi : {0.1, 0.6, 0.95})
        EXPECT_EQ(stoch_ewa({2.4, 3.9}, {0, 0}, {0, 0}, xi).coord,
                  stoch_bilinear({2.4, 3.9}, xi).coord);
}

TEST(StochEwa, PyramidLevelsAndTexels) {
    FilterQuery2D q{{40.3, 17.8}, {3.1, 0.9}, {-0.4, 2.6}};
    int levels = 7;
    RngStream rng(12);
    ChiSquare c = frequency_test(ewa_mip_taps(q, levels), kDraws, [&] {
        WeightedTap t = stoch_ewa_mip_taps(q, levels, rng.uniform()).taps[0];
        return key(t.coord, t.level);
    });
    EXPECT_TRUE(c.pass()) << c.statistic << " dof " << c.dof;
}

TEST(StochMipLevel, SplitsByFraction) {
    RngStream rng(13);
    long long upper = 0;
    for (long long i = 0; i < kDraws; ++i) {
        LevelSample l = stoch_mip_level(1.5, rng.uniform(), 0, 5);
        ASSERT_TRUE(l.level == 1 || l.level == 2);
        upper += l.level == 2;
    }
    EXPECT_NEAR(double(upper) / kDraws, 0.5, 4 * std::sqrt(0.25 / kDraws));
}

TEST(StochMipLevel, ClampsAndIntegers) {
    EXPECT_EQ(stoch_mip_level(-2.0, 0.9, 0, 5).level, 0);
    EXPECT_EQ(stoch_mip_level(9.0, 0.1, 0, 5).level, 5);
    for (double xi : {0.0, 0.4, 0.99})
        EXPECT_EQ(stoch_mip_level(3.0, xi, 0, 5).level, 3);
    EXPECT_THROW(stoch_mip_level(1, 0.5, 3, 2), ParameterError);
}

TEST(StochTrilinearMip, MatchesDeterministicTaps) {
    Vec2 st{13.6, 22.2};
    double lod = 2.3;
    RngStream rng(14);
    ChiSquare c = frequency_test(trilinear_mip_taps(st, lod, 6), kDraws, [&] {
        WeightedTap t = stoch_trilinear_mip_taps(st, lod, 6, rng.uniform()).taps[0];
        return key(t.coord, t.level);
    });
    EXPECT_TRUE(c.pass()) << c.statistic;
}

TEST(DiscreteGaussian, MatchesWindowWeights) {
    for (double radius : {2.0, 3.0}) {
        Vec2 st{5.3, 8.75};
        RngStream rng(15);
        ChiSquare c = frequency_test(gaussian_window_taps(st, 0.8, radius), kDraws, [&] {
            return key(discrete_gaussian_sample(st, 0.8, rng.uniform(), radius).coord);
        });
        EXPECT_TRUE(c.pass()) << "radius " << radius << ": " << c.statistic;
    }
}

TEST(StochBlend, EqualThirds) {
    std::vector<double> w{1, 1, 1};
    RngStream rng(16);
    std::vector<double> counts(3);
    for (long long i = 0; i < kDraws; ++i)
        counts[stoch_blend(w, rng.uniform()).index] += 1;
    ChiSquare c = chi_square(counts, {1.0 / 3, 1.0 / 3, 1.0 / 3}, kDraws);
    EXPECT_TRUE(c.pass()) << c.statistic;
}

TEST(Evaluate, OneFetchPerTap) {
    std::mt19937_64 gen(17);
    TextureGrid tex = random_texture(gen, 16, 16);
    RngStream rng(17);
    for (FilterKind k : {FilterKind::Bilinear, FilterKind::BicubicBSpline, FilterKind::Gaussian}) {
        FilterSettings f{k};
        for (int i = 0; i < 100; ++i) {
            FetchCounter counter;
            TapEstimate e = evaluate(tex, stochastic_taps(f, Estimator::Stochastic,
                                                          {{7.3, 8.6}}, 1, rng),
                                     counter);
            EXPECT_EQ(e.fetches, 1u);
            EXPECT_EQ(counter.count, 1u);
        }
    }
    FetchCounter counter;
    TapEstimate e = stoch_bicubic_keys(tex, {7.5, 8.5}, 0.4, -0.5, counter);
    EXPECT_EQ(e.fetches, 2u);
}

TEST(Unbiased, DispatchedEstimatorsMatchReference) {
    std::mt19937_64 gen(18);
    TextureGrid tex = random_texture(gen, 32, 32);
    MipPyramid pyr = build_mip_pyramid(tex);
    struct Case {
        FilterKind kind;
        Estimator e;
    };
    const Case cases[] = {
        {FilterKind::Bilinear, Estimator::Stochastic},    {FilterKind::Bilinear, Estimator::Fis},
        {FilterKind::BicubicBSpline, Estimator::Stochastic},
        {FilterKind::BicubicBSpline, Estimator::Fis},     {FilterKind::BicubicKeys, Estimator::Stochastic},
        {FilterKind::Gaussian, Estimator::Stochastic},    {FilterKind::Gaussian, Estimator::Fis},
        {FilterKind::Ewa, Estimator::Stochastic},         {FilterKind::TrilinearMip, Estimator::Stochastic},
    };
    FilterQuery2D q{{11.4, 19.7}, {2.2, 0.5}, {-0.6, 1.4}};
    for (const Case &cs : cases) {
        FilterSettings f{cs.kind};
        TapList ref = reference_taps(f, cs.e, q, pyr.num_levels());
        FetchCounter counter;
        double target = apply_taps(pyr, ref, counter)[0];
        RngStream rng(18, int(cs.kind), int(cs.e));
        CltCheck c = clt_check(200000, target, [&] {
            TapSet t = stochastic_taps(f, cs.e, q, pyr.num_levels(), rng);
            return apply_taps(pyr, t.view(), counter)[0];
        });
        EXPECT_TRUE(c.pass()) << to_string(cs.kind) << "/" << to_string(cs.e) << ": " << c.mean
                              << " vs " << target << " sem " << c.sem;
    }
}

TEST(Unbiased, VolumeEstimators) {
    std::mt19937_64 gen(19);
    TextureGrid vol = random_volume(gen, 8, 8, 8);
    FilterQuery3D q{{3.3, 4.6, 2.1}};
    for (FilterKind k : {FilterKind::Trilinear, FilterKind::TricubicBSpline})
        for (Estimator e : {Estimator::Stochastic, Estimator::Fis}) {
            FilterSettings f{k};
            FetchCounter counter;
            double target = apply_taps(vol, reference_taps(f, e, q), counter)[0];
            RngStream rng(19, int(k), int(e));
            CltCheck c = clt_check(200000, target, [&] {
                return apply_taps(vol, stochastic_taps(f, e, q, rng).view(), counter)[0];
            });
            EXPECT_TRUE(c.pass()) << to_string(k) << "/" << to_string(e) << ": " << c.mean
                                  << " vs " << target;
        }
}

TEST(Dispatch, UnsupportedCombinationsThrow) {
    RngStream rng(20);
    FilterQuery2D q{{1, 1}};
    EXPECT_THROW(stochastic_taps({FilterKind::Ewa}, Estimator::Fis, q, 1, rng), ParameterError);
    EXPECT_THROW(stochastic_taps({FilterKind::Bilinear}, Estimator::Deterministic, q, 1, rng),
                 ParameterError);
    EXPECT_THROW(stochastic_taps({FilterKind::Trilinear}, Estimator::Stochastic, q, 1, rng),
                 ParameterError);
    EXPECT_THROW(reference_taps({FilterKind::BicubicKeys}, Estimator::Fis, q, 1), ParameterError);
    EXPECT_EQ(uniforms_per_lookup({FilterKind::BicubicBSpline}, Estimator::Fis), 6);
    EXPECT_EQ(parse_filter_kind("bicubic-keys"), FilterKind::BicubicKeys);
    EXPECT_THROW(parse_filter_kind("lanczos"), ParameterError);
}
