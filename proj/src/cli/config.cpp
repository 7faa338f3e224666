// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/cli.h>
#include <stochtex/fixtures.h>
#include <stochtex/image_io.h>

#include <algorithm>
#include <cctype>
#include <filesystem>

namespace stochtex::cli {

FilterSettings ExperimentConfig::filter_settings() const {
    FilterSettings f;
    f.kind = parse_filter_kind(filter);
    f.keys_a = keys_a;
    f.sigma = sigma;
    f.radius = radius;
    if (!(sigma > 0) || !std::isfinite(sigma))
        throw ParameterError("--sigma must be positive");
    if (radius < 0 || !std::isfinite(radius))
        throw ParameterError("--radius must be non-negative");
    if (!std::isfinite(keys_a))
        throw ParameterError("--keys-a must be finite");
    return f;
}

Estimator ExperimentConfig::estimator_kind() const { return parse_estimator(estimator); }

TextureGrid load_input(const std::string &input) {
    if (input.empty())
        throw ParameterError("--input is required");
    constexpr std::string_view prefix = "fixture:";
    if (input.rfind(prefix, 0) == 0)
        return make_fixture(std::string_view(input).substr(prefix.size()));
    std::filesystem::path path(input);
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (ext == ".stxv")
        return load_volume(path);
    if (ext == ".stxd")
        return load_dct(path).decode_all();
    return load_image(path);
}

std::vector<FilterQuery2D> query_lattice(int width, int height, int grid, double scale) {
    if (grid < 1)
        throw ParameterError("--grid must be positive");
    if (!(scale > 0) || !std::isfinite(scale))
        throw ParameterError("--scale must be positive");
    std::vector<FilterQuery2D> qs;
    qs.reserve(std::size_t(grid) * grid);
    for (int j = 0; j < grid; ++j)
        for (int i = 0; i < grid; ++i) {
            FilterQuery2D q;
            q.st = {(i + 0.5) * width / grid - 0.5, (j + 0.5) * height / grid - 0.5};
            q.dst0 = {1 / scale, 0};
            q.dst1 = {0, 1 / scale};
            qs.push_back(q);
        }
    return qs;
}

} // namespace stochtex::cli
