// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/cli.h>
#include <stochtex/fixtures.h>
#include <stochtex/image_io.h>

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace stochtex::cli {

namespace {

// Writes CSV either to --csv or to `out`.
template <class Fn>
void emit_csv(const ExperimentConfig &cfg, std::ostream &out, Fn &&write) {
    if (cfg.csv.empty()) {
        write(out);
        return;
    }
    std::ofstream file(cfg.csv, std::ios::trunc);
    if (!file)
        throw IoError("cannot open " + cfg.csv + " for writing");
    write(file);
    if (!file)
        throw IoError("write failed for " + cfg.csv);
}

void run_command(const ExperimentConfig &cfg, std::ostream &out, std::ostream &err) {
    if (cfg.command == "fixtures") {
        if (cfg.output.empty())
            throw ParameterError("fixtures needs --output DIR");
        std::filesystem::create_directories(cfg.output);
        for (std::string_view name : fixture_names()) {
            TextureGrid t = make_fixture(name);
            std::filesystem::path p = std::filesystem::path(cfg.output) / std::string(name);
            if (t.dimensions() == 3)
                store_volume(t, p.replace_extension(".stxv"));
            else
                store_image(t, p.replace_extension(".pfm"));
            err << "wrote " << p.string() << '\n';
        }
        return;
    }

    TextureGrid src = load_input(cfg.input);
    if (cfg.command == "resample") {
        ResampleResult r = run_resample(src, cfg);
        if (!cfg.output.empty())
            store_image(r.image, cfg.output);
        emit_csv(cfg, out, [&](std::ostream &o) { write_resample_csv(o, cfg, r); });
    } else if (cfg.command == "converge") {
        auto rows = run_converge(src, cfg);
        emit_csv(cfg, out, [&](std::ostream &o) { write_converge_csv(o, rows); });
        for (std::string_view est : {"stoch", "fis"}) {
            std::vector<double> x, y;
            for (const ConvergeRow &r : rows)
                if (r.estimator == est) {
                    x.push_back(double(r.n));
                    y.push_back(r.abs_error);
                }
            if (x.size() >= 2)
                err << est << " log-log slope " << loglog_slope(x, y) << '\n';
        }
    } else if (cfg.command == "order") {
        auto rows = run_order(src, cfg);
        emit_csv(cfg, out, [&](std::ostream &o) { write_order_csv(o, rows); });
        double max_diff = 0;
        for (const OrderRow &r : rows)
            max_diff = std::max(max_diff, r.abs_diff);
        err << "max abs_diff " << max_diff;
        if (cfg.diff_floor > 0)
            err << (max_diff > cfg.diff_floor ? " exceeds" : " does not exceed") << " floor "
                << cfg.diff_floor;
        err << '\n';
    } else if (cfg.command == "volume") {
        VolumeResult r = run_volume(src, cfg);
        if (!cfg.output.empty())
            store_image(r.stochastic_tricubic, cfg.output);
        emit_csv(cfg, out, [&](std::ostream &o) { write_volume_csv(o, r.rows); });
    } else if (cfg.command == "dct") {
        DctResult r = run_dct(src, cfg);
        if (!cfg.output.empty())
            store_dct(r.dct, cfg.output);
        emit_csv(cfg, out, [&](std::ostream &o) { write_dct_csv(o, r); });
    } else {
        throw ParameterError("unknown command '" + cfg.command + "'");
    }
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Stochastic texture filtering experiments"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a file written by --dump-config");

    ExperimentConfig cfg;
    bool dump = false;
    app.add_option("--input", cfg.input, "Image, volume (.stxv), DCT texture (.stxd) or fixture:NAME");
    app.add_option("--output", cfg.output, "Output image, DCT texture or fixture directory");
    app.add_option("--csv", cfg.csv, "CSV output path (default: stdout)");
    app.add_option("--filter", cfg.filter, "Filter family")
        ->check(CLI::IsMember({"bilinear", "trilinear", "bicubic-bspline", "tricubic-bspline",
                               "bicubic-keys", "gaussian", "ewa", "trilinear-mip"}))
        ->capture_default_str();
    app.add_option("--estimator", cfg.estimator, "det, stoch or fis")
        ->check(CLI::IsMember({"det", "stoch", "fis"}))
        ->capture_default_str();
    app.add_option("--spp", cfg.spp,
                   "Samples per pixel or query (0: command default; resample 1, order 10000, "
                   "volume 256)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--sigma", cfg.sigma, "Gaussian standard deviation in texels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--radius", cfg.radius, "Gaussian truncation radius (0: 3 sigma)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--keys-a", cfg.keys_a, "Keys cubic parameter")->capture_default_str();
    app.add_option("--scale", cfg.scale, "Output/input size ratio")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--map", cfg.map, "identity, power:k, exp:s, planck:c, threshold:t, metalness:d:s")
        ->capture_default_str();
    app.add_option("--grid", cfg.grid, "Query lattice side (order) or query count (converge, dct)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--size", cfg.size, "Image side for volume")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--ref-spp", cfg.ref_spp, "Reference samples per pixel for volume")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--max-n", cfg.max_n, "Largest sample count for converge")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--diff-floor", cfg.diff_floor, "Report whether order's max abs_diff exceeds this")
        ->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads (0: all cores)")->capture_default_str();
    app.add_flag("--dump-config", dump, "Print the parsed options in --config format and exit")
        ->configurable(false);

    const std::pair<const char *, const char *> commands[] = {
        {"resample", "Rescale an image with a deterministic or stochastic filter"},
        {"converge", "Error against sample count for each estimator"},
        {"order", "Shade-then-filter against filter-then-shade"},
        {"volume", "Fetch counts and image MSE for trilinear and tricubic volume filtering"},
        {"dct", "Compress an image to DCT blocks and count decodes per lookup"},
        {"fixtures", "Write the procedural test assets to --output"},
    };
    for (auto [name, help] : commands)
        app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    if (dump) {
        out << app.config_to_str(true, false);
        return kExitOk;
    }

    try {
        run_command(cfg, out, err);
    } catch (const ParameterError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError &e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}

} // namespace stochtex::cli
