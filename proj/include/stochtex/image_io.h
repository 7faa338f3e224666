// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <stochtex/texture.h>

#include <filesystem>

namespace stochtex {

struct ImageReadOptions {
    // Keep sRGB-encoded PNG values as stored instead of converting to linear.
    bool raw = false;
};

struct ImageWriteOptions {
    // PNG only: 8 or 16 bits per channel.
    int png_bit_depth = 8;
};

// PNG (8/16-bit, 1-4 channels) or PFM, chosen by file extension.
// PNG color channels are sRGB decoded on load unless options.raw is set;
// an alpha channel (2 or 4 channels) is always linear. PFM holds linear
// float data with 1 or 3 channels.
TextureGrid load_image(const std::filesystem::path &path, const ImageReadOptions &options = {});

// PNG output encodes Linear textures to sRGB before quantizing; textures
// tagged SRGBEncoded are quantized as-is. PFM output is bit-exact.
void store_image(const TextureGrid &tex, const std::filesystem::path &path,
                 const ImageWriteOptions &options = {});

TextureGrid load_pfm(const std::filesystem::path &path);
void store_pfm(const TextureGrid &tex, const std::filesystem::path &path);

TextureGrid load_png(const std::filesystem::path &path, const ImageReadOptions &options = {});
void store_png(const TextureGrid &tex, const std::filesystem::path &path, int bit_depth = 8);

// Volume file: "STXV", u32 version (1), u32 dims[3], u32 channels, then
// dims[0]*dims[1]*dims[2]*channels little-endian f32 values, x fastest.
TextureGrid load_volume(const std::filesystem::path &path);
void store_volume(const TextureGrid &tex, const std::filesystem::path &path);

} // namespace stochtex
