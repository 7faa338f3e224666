// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

// Experiment drivers behind the `stochtex` command-line tool. Each run_*
// function is usable on its own; run_cli adds flag parsing, file output and
// the exit-code contract.

#include <stochtex/dct_texture.h>
#include <stochtex/filter_dispatch.h>
#include <stochtex/shading_lab.h>
#include <stochtex/texture.h>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stochtex::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitIo = 3, kExitNumeric = 4 };

// A NaN or infinity showed up where a finite result was expected.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string command;
    // A file path (.png, .pfm, .stxv, .stxd) or fixture:NAME.
    std::string input;
    std::string output;
    std::string csv;
    std::string filter = "bilinear";
    std::string estimator = "stoch";
    std::string map = "identity";
    // 0 selects the command default.
    long long spp = 0;
    std::uint64_t seed = 0;
    double sigma = 0.5;
    double keys_a = -0.5;
    double radius = 0;
    double scale = 1;
    // Queries per axis for order, queries in total for converge and dct.
    int grid = 16;
    // Output image side for volume.
    int size = 32;
    long long ref_spp = 16384;
    long long max_n = 65536;
    double diff_floor = 0;
    unsigned threads = 0;

    FilterSettings filter_settings() const;
    Estimator estimator_kind() const;
};

TextureGrid load_input(const std::string &input);

// resample ------------------------------------------------------------------

struct ResampleResult {
    TextureGrid image;
    // Deterministic evaluation of the filter the estimator converges to.
    TextureGrid reference;
    double mse = 0;
    // Mean over pixels and channels of the per-pixel sample variance.
    double mean_variance = 0;
    std::uint64_t fetches = 0;
};

ResampleResult run_resample(const TextureGrid &src, const ExperimentConfig &cfg);
void write_resample_csv(std::ostream &out, const ExperimentConfig &cfg, const ResampleResult &r);

// converge ------------------------------------------------------------------

struct ConvergeRow {
    std::string estimator;
    long long n = 0;
    // Mean over queries of |mean of n estimates - reference|.
    double abs_error = 0;
    double rmse = 0;
    // Mean over queries of the single-estimate variance.
    double variance = 0;
};

// N = 1, 4, 16, ... up to cfg.max_n, for det, stoch and (where defined) fis.
std::vector<ConvergeRow> run_converge(const TextureGrid &src, const ExperimentConfig &cfg);
void write_converge_csv(std::ostream &out, std::span<const ConvergeRow> rows);
// Least-squares slope of log(y) against log(x) over rows with y > 0.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// order ---------------------------------------------------------------------

// A 2D texture gives a grid x grid query lattice; a volume is cut at its
// middle slice first.
std::vector<OrderRow> run_order(const TextureGrid &src, const ExperimentConfig &cfg);
std::vector<FilterQuery2D> query_lattice(int width, int height, int grid, double scale);

// volume --------------------------------------------------------------------

struct VolumeRow {
    std::string filter, estimator;
    long long spp = 0;
    long long pixels = 0;
    std::uint64_t fetches = 0;
    double fetches_per_lookup = 0;
    double mse = 0;
    double mean_variance = 0;
};

struct VolumeResult {
    std::vector<VolumeRow> rows;
    TextureGrid reference;
    TextureGrid stochastic_tricubic;
};

// Projected-density image of a volume: each pixel sample jitters within the
// pixel footprint and picks a uniform depth, and the pixel is the sample
// mean. Rows cover det/stoch trilinear and tricubic at cfg.spp against a
// deterministic tricubic reference at cfg.ref_spp with independent samples.
VolumeResult run_volume(const TextureGrid &vol, const ExperimentConfig &cfg);
void write_volume_csv(std::ostream &out, std::span<const VolumeRow> rows);

// dct -----------------------------------------------------------------------

struct DctRow {
    std::string filter, estimator;
    long long lookups = 0;
    std::uint64_t decodes = 0;
    double decodes_per_lookup = 0;
};

struct DctResult {
    DctBlockTexture dct;
    TextureGrid decoded;
    // Against the input with peak 1; +inf when identical.
    double psnr = 0;
    std::vector<DctRow> rows;
};

DctResult run_dct(const TextureGrid &src, const ExperimentConfig &cfg);
void write_dct_csv(std::ostream &out, const DctResult &r);

// Parses argv and runs one command. Returns an ExitCode value.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace stochtex::cli
