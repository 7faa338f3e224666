// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/csv.h>
#include <stochtex/parallel.h>
#include <stochtex/shading_lab.h>

#include <charconv>
#include <ostream>

namespace stochtex {

namespace {

double parse_number(std::string_view s, std::string_view text) {
    double v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
        throw ParameterError("bad number in shading map '" + std::string(text) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        std::size_t p = s.find(sep, start);
        parts.push_back(s.substr(start, p - start));
        if (p == std::string_view::npos)
            return parts;
        start = p + 1;
    }
}

} // namespace

ShadingMap ShadingMap::parse(std::string_view text) {
    auto parts = split(text, ':');
    std::string_view name = parts[0];
    auto arg = [&](std::size_t i) { return parse_number(parts[i], text); };
    auto want = [&](std::size_t n) {
        if (parts.size() != n + 1)
            throw ParameterError("shading map '" + std::string(name) + "' takes " +
                                 std::to_string(n) + " argument(s)");
    };
    if (name == "identity") {
        want(0);
        return identity();
    }
    if (name == "power") {
        want(1);
        return power(arg(1));
    }
    if (name == "exp") {
        want(1);
        return exp(arg(1));
    }
    if (name == "planck") {
        if (parts.size() == 1)
            return planck();
        want(1);
        if (!(arg(1) > 0))
            throw ParameterError("planck constant must be positive");
        return planck(arg(1));
    }
    if (name == "threshold") {
        want(1);
        return threshold(arg(1));
    }
    if (name == "metalness") {
        want(2);
        return metalness(arg(1), arg(2));
    }
    throw ParameterError("unknown shading map '" + std::string(text) + "'");
}

std::string ShadingMap::to_string() const {
    switch (kind_) {
    case Kind::Identity:
        return "identity";
    case Kind::Power:
        return "power:" + format_number(p0_);
    case Kind::Exp:
        return "exp:" + format_number(p0_);
    case Kind::PlanckLike:
        return "planck:" + format_number(p0_);
    case Kind::Threshold:
        return "threshold:" + format_number(p0_);
    case Kind::MetalnessMix:
        return "metalness:" + format_number(p0_) + ":" + format_number(p1_);
    }
    return "identity";
}

double ShadingMap::operator()(double x) const {
    switch (kind_) {
    case Kind::Identity:
        return x;
    case Kind::Power:
        return std::copysign(std::pow(std::abs(x), p0_), x);
    case Kind::Exp:
        return std::exp(p0_ * x);
    case Kind::PlanckLike:
        // expm1 keeps precision for large t; c/t overflow gives 0.
        return x > 0 ? 1 / std::expm1(p0_ / x) : 0;
    case Kind::Threshold:
        return x >= p0_ ? 1 : 0;
    case Kind::MetalnessMix:
        return p0_ + (p1_ - p0_) * x;
    }
    return x;
}

namespace {

template <class S>
std::vector<OrderRow> report(const S &tex, const ShadingMap &g, const FilterSettings &f,
                             std::span<const FilterQuery2D> queries,
                             const OrderReportOptions &o) {
    std::vector<OrderRow> rows(queries.size());
    parallel_for(
        queries.size(),
        [&](std::size_t i) {
            const FilterQuery2D &q = queries[i];
            OrderRow &r = rows[i];
            r.query_u = q.st[0];
            r.query_v = q.st[1];
            r.before = shade_filter_before(tex, q, f, g, o.estimator, o.channel);
            r.after_ref = shade_filter_after_ref(tex, q, f, g, o.estimator, o.channel);
            RngStream rng(o.seed, i, 0);
            FetchCounter counter;
            MeanSem ms = mean_and_sem(o.samples, [&] {
                return shade_filter_after_stoch(tex, q, f, o.estimator, g, rng, counter,
                                                o.channel);
            });
            r.after_stoch_mean = ms.mean;
            r.after_stoch_sem = ms.sem;
            r.abs_diff = std::abs(r.before - r.after_ref);
        },
        o.threads);
    return rows;
}

} // namespace

std::vector<OrderRow> order_divergence_report(const TextureGrid &tex, const ShadingMap &g,
                                              const FilterSettings &f,
                                              std::span<const FilterQuery2D> queries,
                                              const OrderReportOptions &options) {
    return report(tex, g, f, queries, options);
}

std::vector<OrderRow> order_divergence_report(const MipPyramid &tex, const ShadingMap &g,
                                              const FilterSettings &f,
                                              std::span<const FilterQuery2D> queries,
                                              const OrderReportOptions &options) {
    return report(tex, g, f, queries, options);
}

void write_order_csv(std::ostream &out, std::span<const OrderRow> rows) {
    write_csv_header(out, {"query_u", "query_v", "before", "after_ref", "after_stoch_mean",
                           "after_stoch_sem", "abs_diff"});
    for (const OrderRow &r : rows) {
        CsvRow row;
        row << r.query_u << r.query_v << r.before << r.after_ref << r.after_stoch_mean
            << r.after_stoch_sem << r.abs_diff;
        out << row.str() << '\n';
    }
}

} // namespace stochtex
