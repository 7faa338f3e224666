// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/cli.h>
#include <stochtex/csv.h>
#include <stochtex/parallel.h>

#include <cmath>
#include <limits>
#include <ostream>

namespace stochtex::cli {

namespace {

// Per-channel running mean and variance.
struct Running {
    long long n = 0;
    Texel mean, m2;

    void add(const Texel &x) {
        ++n;
        for (int c = 0; c < 4; ++c) {
            double d = x[c] - mean[c];
            mean[c] += d / double(n);
            m2[c] += d * (x[c] - mean[c]);
        }
    }
    double variance(int c) const { return n > 1 ? m2[c] / double(n - 1) : 0; }
};

template <class Fn>
decltype(auto) with_source(const TextureGrid &tex, FilterKind kind, Fn &&fn) {
    if (needs_pyramid(kind))
        return fn(build_mip_pyramid(tex));
    return fn(tex);
}

void require_finite(double v, const char *what) {
    if (!std::isfinite(v))
        throw NumericalError(std::string("non-finite value in ") + what);
}

void require_finite(const TextureGrid &img, const char *what) {
    for (float v : img.data())
        if (!std::isfinite(v))
            throw NumericalError(std::string("non-finite value in ") + what);
}

long long spp_or(const ExperimentConfig &cfg, long long fallback) {
    long long spp = cfg.spp > 0 ? cfg.spp : fallback;
    if (spp < 1)
        throw ParameterError("--spp must be positive");
    return spp;
}

template <class S>
Texel taps_value(const S &src, std::span<const WeightedTap> taps, FetchCounter &counter) {
    return apply_taps(src, taps, counter);
}

} // namespace

// resample ------------------------------------------------------------------

ResampleResult run_resample(const TextureGrid &src, const ExperimentConfig &cfg) {
    if (src.dimensions() != 2)
        throw ParameterError("resample needs a 2D image");
    FilterSettings f = cfg.filter_settings();
    Estimator e = cfg.estimator_kind();
    if (is_volume_filter(f.kind))
        throw ParameterError("resample needs a 2D filter");
    if (!(cfg.scale > 0) || !std::isfinite(cfg.scale))
        throw ParameterError("--scale must be positive");
    long long spp = e == Estimator::Deterministic ? 1 : spp_or(cfg, 1);
    int w = src.width(), h = src.height(), ch = src.channels();
    int ow = std::max(1, int(std::lround(w * cfg.scale)));
    int oh = std::max(1, int(std::lround(h * cfg.scale)));
    double rx = double(w) / ow, ry = double(h) / oh;

    ResampleResult r;
    r.image = TextureGrid(ow, oh, ch);
    r.reference = TextureGrid(ow, oh, ch);
    r.image.set_color_space(src.color_space());
    r.reference.set_color_space(src.color_space());
    std::size_t pixels = std::size_t(ow) * oh;
    std::vector<Texel> est(pixels), ref(pixels);
    std::vector<double> var(pixels);
    std::vector<std::uint64_t> fetches(pixels);

    with_source(src, f.kind, [&](const auto &tex) {
        int levels = tex.num_levels();
        parallel_for(
            pixels,
            [&](std::size_t p) {
                int x = int(p % ow), y = int(p / ow);
                FilterQuery2D q;
                q.st = {(x + 0.5) * rx - 0.5, (y + 0.5) * ry - 0.5};
                q.dst0 = {rx, 0};
                q.dst1 = {0, ry};
                FetchCounter scratch, counter;
                ref[p] = taps_value(tex, reference_taps(f, e, q, levels), scratch);
                if (e == Estimator::Deterministic) {
                    est[p] = taps_value(tex, reference_taps(f, e, q, levels), counter);
                } else {
                    RngStream rng(cfg.seed, p, 0);
                    Running acc;
                    for (long long s = 0; s < spp; ++s)
                        acc.add(taps_value(tex, stochastic_taps(f, e, q, levels, rng).view(),
                                           counter));
                    est[p] = acc.mean;
                    double v = 0;
                    for (int c = 0; c < ch; ++c)
                        v += acc.variance(c);
                    var[p] = v / ch;
                }
                fetches[p] = counter.count;
            },
            cfg.threads);
        return 0;
    });

    double se = 0, vs = 0;
    for (std::size_t p = 0; p < pixels; ++p) {
        int x = int(p % ow), y = int(p / ow);
        for (int c = 0; c < ch; ++c) {
            r.image.at(x, y, c) = float(est[p][c]);
            r.reference.at(x, y, c) = float(ref[p][c]);
            double d = est[p][c] - ref[p][c];
            se += d * d;
        }
        vs += var[p];
        r.fetches += fetches[p];
    }
    r.mse = se / double(pixels * ch);
    r.mean_variance = vs / double(pixels);
    require_finite(r.image, "resampled image");
    require_finite(r.mse, "resample statistics");
    return r;
}

void write_resample_csv(std::ostream &out, const ExperimentConfig &cfg, const ResampleResult &r) {
    Estimator e = cfg.estimator_kind();
    long long spp = e == Estimator::Deterministic ? 1 : spp_or(cfg, 1);
    long long pixels = (long long)r.image.texel_count();
    write_csv_header(out, {"filter", "estimator", "spp", "width", "height", "pixels", "mse_vs_reference",
                           "mean_pixel_variance", "fetches", "fetches_per_pixel"});
    CsvRow row;
    row << cfg.filter << cfg.estimator << spp << r.image.width() << r.image.height() << pixels
        << r.mse << r.mean_variance << (unsigned long long)r.fetches
        << double(r.fetches) / double(pixels);
    out << row.str() << '\n';
}

// converge ------------------------------------------------------------------

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0))
            continue;
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2)
        return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

struct AnyQuery {
    bool volume = false;
    FilterQuery2D q2;
    FilterQuery3D q3;
};

template <class S>
TapList any_reference(const FilterSettings &f, Estimator e, const AnyQuery &q, const S &src) {
    return q.volume ? reference_taps(f, e, q.q3) : reference_taps(f, e, q.q2, src.num_levels());
}

template <class S>
TapSet any_stochastic(const FilterSettings &f, Estimator e, const AnyQuery &q, const S &src,
                      RngStream &rng) {
    return q.volume ? stochastic_taps(f, e, q.q3, rng)
                    : stochastic_taps(f, e, q.q2, src.num_levels(), rng);
}

bool has_fis(const FilterSettings &f) {
    try {
        uniforms_per_lookup(f, Estimator::Fis);
        return true;
    } catch (const ParameterError &) {
        return false;
    }
}

} // namespace

std::vector<ConvergeRow> run_converge(const TextureGrid &src, const ExperimentConfig &cfg) {
    FilterSettings f = cfg.filter_settings();
    bool volume = src.dimensions() == 3;
    if (volume != is_volume_filter(f.kind))
        throw ParameterError(volume ? "converge on a volume needs trilinear or tricubic-bspline"
                                    : "converge on an image needs a 2D filter");
    if (volume && needs_pyramid(f.kind))
        throw ParameterError("MIP filters need a 2D image");
    if (cfg.max_n < 1)
        throw ParameterError("--max-n must be positive");
    if (cfg.grid < 1)
        throw ParameterError("--grid must be positive");
    if (!(cfg.scale > 0))
        throw ParameterError("--scale must be positive");

    std::vector<long long> ns;
    for (long long n = 1; n <= cfg.max_n; n *= 4)
        ns.push_back(n);
    std::vector<Estimator> estimators{Estimator::Deterministic, Estimator::Stochastic};
    if (has_fis(f))
        estimators.push_back(Estimator::Fis);

    std::size_t nq = std::size_t(cfg.grid);
    std::vector<AnyQuery> queries(nq);
    for (std::size_t i = 0; i < nq; ++i) {
        RngStream pos(cfg.seed, i, 0, 1);
        AnyQuery &q = queries[i];
        q.volume = volume;
        auto coord = [&](int extent) { return pos.uniform() * (extent - 1); };
        if (volume) {
            q.q3.p = {coord(src.width()), coord(src.height()), coord(src.depth())};
        } else {
            q.q2.st = {coord(src.width()), coord(src.height())};
            q.q2.dst0 = {1 / cfg.scale, 0};
            q.q2.dst1 = {0, 1 / cfg.scale};
        }
    }

    int ch = src.channels();
    std::vector<ConvergeRow> rows;
    with_source(src, f.kind, [&](const auto &tex) {
        for (std::size_t ei = 0; ei < estimators.size(); ++ei) {
            Estimator e = estimators[ei];
            // [query][n] -> (abs error, squared error, variance)
            std::vector<std::array<double, 3>> cells(nq * ns.size());
            parallel_for(
                nq,
                [&](std::size_t qi) {
                    const AnyQuery &q = queries[qi];
                    FetchCounter counter;
                    Texel ref = apply_taps(tex, any_reference(f, e, q, tex), counter);
                    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
                        Running acc;
                        if (e == Estimator::Deterministic) {
                            for (long long s = 0; s < ns[ni]; ++s)
                                acc.add(apply_taps(tex, any_reference(f, e, q, tex), counter));
                        } else {
                            RngStream rng(cfg.seed, qi, std::uint64_t(ns[ni]), 2 + ei);
                            for (long long s = 0; s < ns[ni]; ++s)
                                acc.add(apply_taps(tex, any_stochastic(f, e, q, tex, rng).view(),
                                                   counter));
                        }
                        double ae = 0, se = 0, v = 0;
                        for (int c = 0; c < ch; ++c) {
                            double d = acc.mean[c] - ref[c];
                            ae += std::abs(d);
                            se += d * d;
                            v += acc.variance(c);
                        }
                        cells[qi * ns.size() + ni] = {ae / ch, se / ch, v / ch};
                    }
                },
                cfg.threads);
            for (std::size_t ni = 0; ni < ns.size(); ++ni) {
                ConvergeRow row;
                row.estimator = std::string(to_string(e));
                row.n = ns[ni];
                double ae = 0, se = 0, v = 0;
                for (std::size_t qi = 0; qi < nq; ++qi) {
                    const auto &c = cells[qi * ns.size() + ni];
                    ae += c[0];
                    se += c[1];
                    v += c[2];
                }
                row.abs_error = ae / double(nq);
                row.rmse = std::sqrt(se / double(nq));
                row.variance = v / double(nq);
                require_finite(row.abs_error, "convergence statistics");
                rows.push_back(row);
            }
        }
        return 0;
    });
    return rows;
}

void write_converge_csv(std::ostream &out, std::span<const ConvergeRow> rows) {
    write_csv_header(out, {"estimator", "n", "abs_error", "rmse", "variance"});
    for (const ConvergeRow &r : rows) {
        CsvRow row;
        row << r.estimator << r.n << r.abs_error << r.rmse << r.variance;
        out << row.str() << '\n';
    }
}

// order ---------------------------------------------------------------------

std::vector<OrderRow> run_order(const TextureGrid &src, const ExperimentConfig &cfg) {
    FilterSettings f = cfg.filter_settings();
    if (is_volume_filter(f.kind))
        throw ParameterError("order needs a 2D filter");
    ShadingMap g = ShadingMap::parse(cfg.map);
    TextureGrid img = src;
    if (src.dimensions() == 3) {
        int z = src.depth() / 2;
        img = TextureGrid(src.width(), src.height(), src.channels());
        for (int y = 0; y < src.height(); ++y)
            for (int x = 0; x < src.width(); ++x)
                for (int c = 0; c < src.channels(); ++c)
                    img.at(x, y, c) = src.at(x, y, z, c);
    }
    auto queries = query_lattice(img.width(), img.height(), cfg.grid, cfg.scale);
    OrderReportOptions o;
    o.estimator = cfg.estimator_kind();
    if (o.estimator == Estimator::Deterministic)
        throw ParameterError("order needs a sampling estimator (stoch or fis)");
    o.samples = spp_or(cfg, 10000);
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    std::vector<OrderRow> rows =
        needs_pyramid(f.kind)
            ? order_divergence_report(build_mip_pyramid(img), g, f, queries, o)
            : order_divergence_report(img, g, f, queries, o);
    for (const OrderRow &r : rows) {
        require_finite(r.before, "order report");
        require_finite(r.after_ref, "order report");
        require_finite(r.after_stoch_mean, "order report");
    }
    return rows;
}

// volume --------------------------------------------------------------------

namespace {

struct VolumeVariant {
    FilterKind kind;
    Estimator estimator;
};

constexpr VolumeVariant kVolumeVariants[] = {
    {FilterKind::Trilinear, Estimator::Deterministic},
    {FilterKind::Trilinear, Estimator::Stochastic},
    {FilterKind::TricubicBSpline, Estimator::Deterministic},
    {FilterKind::TricubicBSpline, Estimator::Stochastic},
};
constexpr int kStochTricubic = 3;

// Sample position for (pixel, sample) from stream dimension `dim`.
Vec3 volume_sample(const TextureGrid &vol, int n, int px, int py, std::uint64_t seed,
                   std::uint64_t pixel, long long sample, std::uint64_t dim) {
    RngStream pos(seed, pixel, std::uint64_t(sample), dim);
    double jx = pos.uniform(), jy = pos.uniform(), jz = pos.uniform();
    return {(px + jx) / n * vol.width() - 0.5, (py + jy) / n * vol.height() - 0.5,
            jz * vol.depth() - 0.5};
}

} // namespace

VolumeResult run_volume(const TextureGrid &vol, const ExperimentConfig &cfg) {
    if (vol.dimensions() != 3)
        throw ParameterError("volume needs a 3D input");
    int n = cfg.size;
    if (n < 1)
        throw ParameterError("--size must be positive");
    long long spp = spp_or(cfg, 256);
    if (cfg.ref_spp < 1)
        throw ParameterError("--ref-spp must be positive");
    constexpr int nv = int(std::size(kVolumeVariants));
    std::size_t pixels = std::size_t(n) * n;

    struct PixelOut {
        std::array<double, nv> mean{}, var{};
        std::array<std::uint64_t, nv> fetches{};
        double ref = 0;
    };
    std::vector<PixelOut> px(pixels);
    FilterSettings settings[nv];
    for (int v = 0; v < nv; ++v)
        settings[v].kind = kVolumeVariants[v].kind;

    parallel_for(
        pixels,
        [&](std::size_t p) {
            int x = int(p % n), y = int(p / n);
            PixelOut &out = px[p];
            std::array<Running, nv> acc;
            std::array<FetchCounter, nv> counters;
            for (long long s = 0; s < spp; ++s) {
                FilterQuery3D q{volume_sample(vol, n, x, y, cfg.seed, p, s, 0)};
                RngStream filter_rng(cfg.seed, p, std::uint64_t(s), 1);
                for (int v = 0; v < nv; ++v) {
                    Estimator e = kVolumeVariants[v].estimator;
                    Texel t;
                    if (e == Estimator::Deterministic) {
                        t = apply_taps(vol, reference_taps(settings[v], e, q), counters[v]);
                    } else {
                        // Both stochastic variants see the same uniform.
                        RngStream rng = filter_rng;
                        t = apply_taps(vol, stochastic_taps(settings[v], e, q, rng).view(),
                                       counters[v]);
                    }
                    acc[v].add(t);
                }
            }
            for (int v = 0; v < nv; ++v) {
                out.mean[v] = acc[v].mean[0];
                out.var[v] = acc[v].variance(0);
                out.fetches[v] = counters[v].count;
            }
            Running ref;
            FetchCounter scratch;
            for (long long s = 0; s < cfg.ref_spp; ++s) {
                FilterQuery3D q{volume_sample(vol, n, x, y, cfg.seed, p, s, 2)};
                ref.add(apply_taps(vol, reference_taps(settings[2], Estimator::Deterministic, q),
                                   scratch));
            }
            out.ref = ref.mean[0];
        },
        cfg.threads);

    VolumeResult r;
    r.reference = TextureGrid(n, n, 1);
    r.stochastic_tricubic = TextureGrid(n, n, 1);
    for (int v = 0; v < nv; ++v) {
        VolumeRow row;
        row.filter = std::string(to_string(kVolumeVariants[v].kind));
        row.estimator = std::string(to_string(kVolumeVariants[v].estimator));
        row.spp = spp;
        row.pixels = (long long)pixels;
        double se = 0, vs = 0;
        for (std::size_t p = 0; p < pixels; ++p) {
            double d = px[p].mean[v] - px[p].ref;
            se += d * d;
            vs += px[p].var[v];
            row.fetches += px[p].fetches[v];
        }
        row.mse = se / double(pixels);
        row.mean_variance = vs / double(pixels);
        row.fetches_per_lookup = double(row.fetches) / double(pixels * spp);
        require_finite(row.mse, "volume statistics");
        r.rows.push_back(row);
    }
    for (std::size_t p = 0; p < pixels; ++p) {
        int x = int(p % n), y = int(p / n);
        r.reference.at(x, y, 0) = float(px[p].ref);
        r.stochastic_tricubic.at(x, y, 0) = float(px[p].mean[kStochTricubic]);
    }
    require_finite(r.stochastic_tricubic, "volume image");
    return r;
}

void write_volume_csv(std::ostream &out, std::span<const VolumeRow> rows) {
    write_csv_header(out, {"filter", "estimator", "spp", "pixels", "fetches", "fetches_per_lookup",
                           "mse_vs_reference", "mean_pixel_variance"});
    for (const VolumeRow &r : rows) {
        CsvRow row;
        row << r.filter << r.estimator << r.spp << r.pixels << (unsigned long long)r.fetches
            << r.fetches_per_lookup << r.mse << r.mean_variance;
        out << row.str() << '\n';
    }
}

// dct -----------------------------------------------------------------------

DctResult run_dct(const TextureGrid &src, const ExperimentConfig &cfg) {
    if (src.dimensions() != 2)
        throw ParameterError("dct needs a 2D image");
    if (cfg.grid < 1)
        throw ParameterError("--grid must be positive");
    DctResult r;
    r.dct = compress_dct(src);
    r.decoded = r.dct.decode_all();
    double se = 0;
    auto a = src.data();
    auto b = r.decoded.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = double(a[i]) - double(b[i]);
        se += d * d;
    }
    double mse = se / double(a.size());
    r.psnr = mse > 0 ? -10 * std::log10(mse) : std::numeric_limits<double>::infinity();

    const FilterKind kinds[] = {FilterKind::Bilinear, FilterKind::BicubicBSpline,
                                FilterKind::BicubicKeys};
    const Estimator ests[] = {Estimator::Deterministic, Estimator::Stochastic};
    for (FilterKind k : kinds)
        for (Estimator e : ests) {
            FilterSettings f = cfg.filter_settings();
            f.kind = k;
            DctRow row;
            row.filter = std::string(to_string(k));
            row.estimator = std::string(to_string(e));
            row.lookups = cfg.grid;
            for (int i = 0; i < cfg.grid; ++i) {
                RngStream pos(cfg.seed, std::uint64_t(i), 0, 1);
                FilterQuery2D q;
                q.st = {pos.uniform() * (src.width() - 1), pos.uniform() * (src.height() - 1)};
                RngStream rng(cfg.seed, std::uint64_t(i), 0, 2);
                DctLookup l = filter_over_dct(r.dct, q, f, e, &rng);
                row.decodes += l.decodes;
            }
            row.decodes_per_lookup = double(row.decodes) / double(row.lookups);
            r.rows.push_back(row);
        }
    require_finite(r.decoded, "decoded texture");
    return r;
}

void write_dct_csv(std::ostream &out, const DctResult &r) {
    write_csv_header(out, {"filter", "estimator", "lookups", "decodes", "decodes_per_lookup",
                           "payload_bytes", "sidecar_bytes", "compression_ratio", "psnr_db"});
    for (const DctRow &d : r.rows) {
        CsvRow row;
        row << d.filter << d.estimator << d.lookups << (unsigned long long)d.decodes
            << d.decodes_per_lookup << (unsigned long long)r.dct.payload_bytes()
            << (unsigned long long)r.dct.sidecar_bytes() << r.dct.compression_ratio() << r.psnr;
        out << row.str() << '\n';
    }
}

} // namespace stochtex::cli
