// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/texture.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace stochtex {

namespace {

int remap_axis(int v, int n, AddressMode mode) {
    if (mode == AddressMode::Wrap) {
        int r = v % n;
        return r < 0 ? r + n : r;
    }
    return std::clamp(v, 0, n - 1);
}

} // namespace

TextureGrid::TextureGrid(int width, int height, int channels, std::vector<float> data)
    : dims_{width, height, 1}, dimensions_(2), channels_(channels), data_(std::move(data)) {
    init_storage();
}

TextureGrid::TextureGrid(int width, int height, int depth, int channels, std::vector<float> data)
    : dims_{width, height, depth}, dimensions_(3), channels_(channels), data_(std::move(data)) {
    init_storage();
}

void TextureGrid::init_storage() {
    for (int d : dims_)
        if (d <= 0)
            throw ParameterError("texture: dimensions must be positive");
    if (channels_ < 1 || channels_ > 4)
        throw ParameterError("texture: channel count must be 1-4");
    std::size_t expected = texel_count();
    if (expected > std::numeric_limits<std::size_t>::max() / std::size_t(channels_))
        throw ParameterError("texture: dimensions overflow");
    expected *= std::size_t(channels_);
    if (data_.empty())
        data_.assign(expected, 0.f);
    else if (data_.size() != expected)
        throw ParameterError("texture: data length " + std::to_string(data_.size()) +
                             " does not match dimensions (" + std::to_string(expected) + ")");
    check_finite();
}

void TextureGrid::check_finite() const {
    for (float v : data_)
        if (!std::isfinite(v))
            throw ParameterError("texture: non-finite texel value");
}

Coord TextureGrid::remap(Coord c) const {
    return {remap_axis(c.x, dims_[0], address_mode_), remap_axis(c.y, dims_[1], address_mode_),
            remap_axis(c.z, dims_[2], address_mode_)};
}

Texel TextureGrid::fetch(Coord c, FetchCounter &counter) const {
    ++counter.count;
    Coord r = remap(c);
    const float *p = data_.data() + index(r.x, r.y, r.z);
    Texel t;
    for (int i = 0; i < channels_; ++i)
        t[i] = p[i];
    return t;
}

Texel TextureGrid::fetch(Coord c, int level, FetchCounter &counter) const {
    if (level != 0)
        throw ParameterError("texture: grid has no MIP level " + std::to_string(level));
    return fetch(c, counter);
}

MipPyramid::MipPyramid(std::vector<TextureGrid> levels) : levels_(std::move(levels)) {
    if (levels_.empty())
        throw ParameterError("mip pyramid: no levels");
}

Texel MipPyramid::fetch(Coord c, int level, FetchCounter &counter) const {
    if (level < 0 || level >= num_levels())
        throw ParameterError("mip pyramid: level " + std::to_string(level) + " out of range");
    return levels_[level].fetch(c, counter);
}

int mip_level_count(std::array<int, 3> dims) {
    int m = std::max({dims[0], dims[1], dims[2]});
    return 1 + std::bit_width(unsigned(m)) - 1;
}

double level_coordinate(double x0, int level) { return std::ldexp(x0 + 0.5, -level) - 0.5; }

namespace {

TextureGrid downsample(const TextureGrid &src) {
    auto d = src.dims();
    bool vol = src.dimensions() == 3;
    int w = (d[0] + 1) / 2, h = (d[1] + 1) / 2, dd = vol ? (d[2] + 1) / 2 : 1;
    TextureGrid dst = vol ? TextureGrid::volume(w, h, dd, src.channels())
                          : TextureGrid(w, h, src.channels());
    dst.set_address_mode(src.address_mode());
    dst.set_color_space(src.color_space());
    int zs = vol ? 2 : 1;
    double norm = 1.0 / (4 * zs);
    for (int z = 0; z < dd; ++z)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                for (int c = 0; c < src.channels(); ++c) {
                    double sum = 0;
                    for (int k = 0; k < zs; ++k)
                        for (int j = 0; j < 2; ++j)
                            for (int i = 0; i < 2; ++i)
                                sum += src.at(std::min(2 * x + i, d[0] - 1),
                                              std::min(2 * y + j, d[1] - 1),
                                              std::min(zs * z + k, d[2] - 1), c);
                    dst.at(x, y, z, c) = float(sum * norm);
                }
    return dst;
}

} // namespace

MipPyramid build_mip_pyramid(const TextureGrid &tex) {
    if (tex.empty())
        throw ParameterError("mip pyramid: empty texture");
    int count = mip_level_count(tex.dims());
    std::vector<TextureGrid> levels;
    levels.reserve(count);
    levels.push_back(tex);
    for (int i = 1; i < count; ++i)
        levels.push_back(downsample(levels.back()));
    return MipPyramid(std::move(levels));
}

namespace {

double check_unit(double v, bool strict, const char *what) {
    if (v >= 0 && v <= 1)
        return v;
    if (strict || std::isnan(v))
        throw ParameterError(std::string(what) + ": value outside [0,1]");
    return std::clamp(v, 0.0, 1.0);
}

} // namespace

double srgb_to_linear(double v, bool strict) {
    v = check_unit(v, strict, "srgb_to_linear");
    if (v <= 0.04045)
        return v / 12.92;
    return std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v, bool strict) {
    v = check_unit(v, strict, "linear_to_srgb");
    if (v <= 0.0031308)
        return 12.92 * v;
    return 1.055 * std::pow(v, 1 / 2.4) - 0.055;
}

} // namespace stochtex
