// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

// Block-DCT compressed 2D texture. Each 8x8 block and channel keeps the six
// lowest zigzag coefficients of an orthonormal DCT-II in 32 bits (7-bit DC,
// five 5-bit AC terms), plus two floats giving the block's value range:
//
//   DC: the block mean, quantized to 7 bits over [lo, hi].
//   AC: coefficient c_k, quantized to 5 bits (-15..15) over
//       +-kappa_k * (hi - lo), where kappa_k is the sum of the positive basis
//       values of term k. Since AC bases sum to zero, |c_k| never exceeds it.
//
// Packed word: DC in bits 0-6, AC term k (k = 0..4) in bits 7 + 5k, stored
// offset by 15.

#include <stochtex/filter_dispatch.h>
#include <stochtex/rng.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace stochtex {

inline constexpr int kDctBlock = 8;
inline constexpr int kDctTerms = 6;

// (vertical, horizontal) frequency of each kept term, in zigzag order.
inline constexpr std::array<std::array<int, 2>, kDctTerms> kDctZigzag{
    {{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}}};

// Orthonormal 8x8 DCT-II basis value of term k at intra-block (x, y).
double dct_basis(int k, int x, int y);
// Sum of the positive values of dct_basis(k, ., .).
double dct_kappa(int k);

struct DctBlockRecord {
    float lo = 0, hi = 0;
    std::uint32_t packed = 0;
};

class DctBlockTexture {
  public:
    DctBlockTexture() = default;
    DctBlockTexture(int width, int height, int channels, std::vector<DctBlockRecord> records);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    int blocks_x() const { return (width_ + kDctBlock - 1) / kDctBlock; }
    int blocks_y() const { return (height_ + kDctBlock - 1) / kDctBlock; }
    AddressMode address_mode() const { return address_mode_; }
    void set_address_mode(AddressMode m) { address_mode_ = m; }

    const std::vector<DctBlockRecord> &records() const { return records_; }
    const DctBlockRecord &record(int bx, int by, int c) const {
        return records_[(std::size_t(by) * blocks_x() + bx) * channels_ + c];
    }

    // Dequantized coefficients of one block and channel, zigzag order.
    std::array<double, kDctTerms> coefficients(int bx, int by, int c) const;

    // Remaps like TextureGrid, then evaluates the six-term inverse DCT at the
    // texel's intra-block position. Bumps counter.decode_count once.
    Texel decode_texel(Coord c, FetchCounter &counter) const;

    // TexelSource interface (single level).
    Texel fetch(Coord c, int level, FetchCounter &counter) const;
    int num_levels() const { return 1; }

    // Every texel decoded, without touching any counter.
    TextureGrid decode_all() const;

    // 4 bytes per block and channel.
    std::uint64_t payload_bytes() const { return std::uint64_t(records_.size()) * 4; }
    // The two range floats per block and channel.
    std::uint64_t sidecar_bytes() const { return std::uint64_t(records_.size()) * 8; }
    // Bytes of 8-bit texel data over payload bytes; 16 for 8-divisible dims.
    double compression_ratio() const {
        return double(std::uint64_t(width_) * height_ * channels_) / double(payload_bytes());
    }

  private:
    int width_ = 0, height_ = 0, channels_ = 0;
    std::vector<DctBlockRecord> records_;
    AddressMode address_mode_ = AddressMode::Clamp;
};

// Throws ParameterError for volumes. Deterministic: equal inputs give
// bitwise-equal records.
DctBlockTexture compress_dct(const TextureGrid &tex);

// "STXD", u32 version (1), u32 width, u32 height, u32 channels, then for each
// block in row-major order and each channel: f32 lo, f32 hi, u32 packed.
void store_dct(const DctBlockTexture &dct, const std::filesystem::path &path);
DctBlockTexture load_dct(const std::filesystem::path &path);

struct DctLookup {
    Texel value;
    std::uint64_t decodes = 0;
};

// One filtered lookup over the compressed texture. Deterministic lookups
// decode every tap; stochastic ones decode one texel (two for positivized
// Keys). rng is only used by stochastic estimators.
DctLookup filter_over_dct(const DctBlockTexture &dct, const FilterQuery2D &q,
                          const FilterSettings &f, Estimator e, RngStream *rng = nullptr);

} // namespace stochtex
