// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <stochtex/common.h>

#include <array>
#include <concepts>
#include <span>
#include <vector>

namespace stochtex {

enum class AddressMode { Clamp, Wrap };
enum class ColorSpace { Linear, SRGBEncoded };

// Anything texels can be fetched from: a single grid, a MIP pyramid or a
// compressed texture. Level 0 is the finest.
template <class S>
concept TexelSource = requires(const S &s, Coord c, int level, FetchCounter &counter) {
    { s.fetch(c, level, counter) } -> std::same_as<Texel>;
    { s.channels() } -> std::convertible_to<int>;
    { s.num_levels() } -> std::convertible_to<int>;
};

// A 2D image or 3D voxel grid of float channels, stored x-fastest with
// channels interleaved: index = ((z * height + y) * width + x) * channels + c.
class TextureGrid {
  public:
    TextureGrid() = default;

    // 2D grid. `data` may be empty (zero-filled) or exactly w*h*channels long.
    TextureGrid(int width, int height, int channels, std::vector<float> data = {});
    // 3D grid.
    TextureGrid(int width, int height, int depth, int channels, std::vector<float> data);

    static TextureGrid volume(int width, int height, int depth, int channels) {
        return TextureGrid(width, height, depth, channels, {});
    }

    int dimensions() const { return dimensions_; }
    int width() const { return dims_[0]; }
    int height() const { return dims_[1]; }
    int depth() const { return dims_[2]; }
    std::array<int, 3> dims() const { return dims_; }
    int channels() const { return channels_; }
    std::size_t texel_count() const {
        return std::size_t(dims_[0]) * std::size_t(dims_[1]) * std::size_t(dims_[2]);
    }
    bool empty() const { return data_.empty(); }

    AddressMode address_mode() const { return address_mode_; }
    void set_address_mode(AddressMode m) { address_mode_ = m; }
    ColorSpace color_space() const { return color_space_; }
    void set_color_space(ColorSpace cs) { color_space_ = cs; }

    std::span<const float> data() const { return data_; }
    std::span<float> data() { return data_; }

    float at(int x, int y, int z, int c) const { return data_[index(x, y, z) + c]; }
    float &at(int x, int y, int z, int c) { return data_[index(x, y, z) + c]; }
    float at(int x, int y, int c) const { return at(x, y, 0, c); }
    float &at(int x, int y, int c) { return at(x, y, 0, c); }

    // Maps an arbitrary coordinate into range according to the address mode.
    Coord remap(Coord c) const;

    // Reads one texel after remapping and bumps counter.count.
    Texel fetch(Coord c, FetchCounter &counter) const;

    // TexelSource interface; a plain grid only has level 0.
    Texel fetch(Coord c, int level, FetchCounter &counter) const;
    int num_levels() const { return 1; }

    // Throws ParameterError on non-finite values.
    void check_finite() const;

  private:
    std::size_t index(int x, int y, int z) const {
        return ((std::size_t(z) * dims_[1] + y) * dims_[0] + x) * channels_;
    }
    void init_storage();

    std::array<int, 3> dims_{0, 0, 1};
    int dimensions_ = 2;
    int channels_ = 1;
    std::vector<float> data_;
    AddressMode address_mode_ = AddressMode::Clamp;
    ColorSpace color_space_ = ColorSpace::Linear;
};

// Chain of successively halved grids; level 0 is the source texture.
class MipPyramid {
  public:
    MipPyramid() = default;
    explicit MipPyramid(std::vector<TextureGrid> levels);

    int num_levels() const { return int(levels_.size()); }
    int channels() const { return levels_.empty() ? 0 : levels_[0].channels(); }
    const TextureGrid &level(int i) const { return levels_[i]; }

    Texel fetch(Coord c, int level, FetchCounter &counter) const;

  private:
    std::vector<TextureGrid> levels_;
};

// Each coarser level is the 2x2 (2x2x2 for volumes) box average of the one
// above, with clamp padding for odd dimensions.
MipPyramid build_mip_pyramid(const TextureGrid &tex);

// Number of levels for a texture: 1 + floor(log2(max dim)).
int mip_level_count(std::array<int, 3> dims);

// Converts a raster coordinate on level 0 to the same point on `level`,
// keeping texel centers at integer positions.
double level_coordinate(double x0, int level);

// sRGB transfer function. Out-of-range input is clamped to [0,1]; in strict
// mode it raises ParameterError instead.
double srgb_to_linear(double v, bool strict = false);
double linear_to_srgb(double v, bool strict = false);

} // namespace stochtex
