// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/dct_texture.h>

#include "binary_io.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stochtex {

namespace {

constexpr int kDcLevels = 127;
constexpr int kAcLevels = 15;
constexpr std::uint32_t kDctVersion = 1;

double axis_basis(int freq, int x) {
    double alpha = freq == 0 ? std::sqrt(1.0 / kDctBlock) : std::sqrt(2.0 / kDctBlock);
    return alpha * std::cos((2 * x + 1) * freq * std::numbers::pi / (2 * kDctBlock));
}

struct BasisTable {
    std::array<std::array<double, kDctBlock * kDctBlock>, kDctTerms> b{};
    std::array<double, kDctTerms> kappa{};

    BasisTable() {
        for (int k = 0; k < kDctTerms; ++k) {
            for (int y = 0; y < kDctBlock; ++y)
                for (int x = 0; x < kDctBlock; ++x) {
                    double v = axis_basis(kDctZigzag[k][0], y) * axis_basis(kDctZigzag[k][1], x);
                    b[k][y * kDctBlock + x] = v;
                    if (v > 0)
                        kappa[k] += v;
                }
        }
    }
};

const BasisTable &basis() {
    static const BasisTable table;
    return table;
}

int wrap_index(int i, int n) {
    int m = i % n;
    return m < 0 ? m + n : m;
}

} // namespace

double dct_basis(int k, int x, int y) { return basis().b.at(k)[y * kDctBlock + x]; }

double dct_kappa(int k) { return basis().kappa.at(k); }

DctBlockTexture::DctBlockTexture(int width, int height, int channels,
                                 std::vector<DctBlockRecord> records)
    : width_(width), height_(height), channels_(channels), records_(std::move(records)) {
    if (width < 1 || height < 1 || channels < 1 || channels > 4)
        throw ParameterError("DctBlockTexture: bad dimensions or channel count");
    if (records_.size() != std::size_t(blocks_x()) * blocks_y() * channels)
        throw ParameterError("DctBlockTexture: record count does not match dimensions");
}

std::array<double, kDctTerms> DctBlockTexture::coefficients(int bx, int by, int c) const {
    const DctBlockRecord &r = record(bx, by, c);
    double lo = r.lo, range = double(r.hi) - double(r.lo);
    std::array<double, kDctTerms> out{};
    double mean = lo + range * double(r.packed & 0x7f) / kDcLevels;
    out[0] = mean * kDctBlock;
    for (int k = 1; k < kDctTerms; ++k) {
        int q = int((r.packed >> (7 + 5 * (k - 1))) & 0x1f) - kAcLevels;
        out[k] = double(q) / kAcLevels * dct_kappa(k) * range;
    }
    return out;
}

Texel DctBlockTexture::decode_texel(Coord c, FetchCounter &counter) const {
    int x = c.x, y = c.y;
    if (address_mode_ == AddressMode::Wrap) {
        x = wrap_index(x, width_);
        y = wrap_index(y, height_);
    } else {
        x = std::clamp(x, 0, width_ - 1);
        y = std::clamp(y, 0, height_ - 1);
    }
    int bx = x / kDctBlock, by = y / kDctBlock;
    int ix = (x % kDctBlock) + kDctBlock * (y % kDctBlock);
    const BasisTable &t = basis();
    Texel out;
    for (int ch = 0; ch < channels_; ++ch) {
        auto coef = coefficients(bx, by, ch);
        double v = 0;
        for (int k = 0; k < kDctTerms; ++k)
            v += coef[k] * t.b[k][ix];
        out[ch] = v;
    }
    ++counter.decode_count;
    return out;
}

Texel DctBlockTexture::fetch(Coord c, int level, FetchCounter &counter) const {
    if (level != 0)
        throw ParameterError("DctBlockTexture has a single level");
    return decode_texel(c, counter);
}

TextureGrid DctBlockTexture::decode_all() const {
    TextureGrid out(width_, height_, channels_);
    FetchCounter scratch;
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x) {
            Texel t = decode_texel({x, y, 0}, scratch);
            for (int c = 0; c < channels_; ++c)
                out.at(x, y, c) = float(t[c]);
        }
    out.set_address_mode(address_mode_);
    return out;
}

DctBlockTexture compress_dct(const TextureGrid &tex) {
    if (tex.dimensions() != 2)
        throw ParameterError("compress_dct: only 2D textures can be compressed");
    int w = tex.width(), h = tex.height(), ch = tex.channels();
    int bxn = (w + kDctBlock - 1) / kDctBlock, byn = (h + kDctBlock - 1) / kDctBlock;
    const BasisTable &t = basis();
    std::vector<DctBlockRecord> records;
    records.reserve(std::size_t(bxn) * byn * ch);
    std::array<double, kDctBlock * kDctBlock> block{};
    for (int by = 0; by < byn; ++by)
        for (int bx = 0; bx < bxn; ++bx)
            for (int c = 0; c < ch; ++c) {
                for (int y = 0; y < kDctBlock; ++y)
                    for (int x = 0; x < kDctBlock; ++x) {
                        int sx = std::min(bx * kDctBlock + x, w - 1);
                        int sy = std::min(by * kDctBlock + y, h - 1);
                        block[y * kDctBlock + x] = tex.at(sx, sy, c);
                    }
                auto [mn, mx] = std::minmax_element(block.begin(), block.end());
                DctBlockRecord r{float(*mn), float(*mx), 0};
                double lo = r.lo, range = double(r.hi) - double(r.lo);
                double mean = 0;
                for (double v : block)
                    mean += v;
                mean /= double(block.size());
                std::uint32_t dc = 0;
                if (range > 0)
                    dc = std::uint32_t(
                        std::clamp(std::lround((mean - lo) / range * kDcLevels), 0L, long(kDcLevels)));
                r.packed = dc;
                for (int k = 1; k < kDctTerms; ++k) {
                    double coef = 0;
                    for (int i = 0; i < kDctBlock * kDctBlock; ++i)
                        coef += block[i] * t.b[k][i];
                    long q = 0;
                    if (range > 0)
                        q = std::clamp(std::lround(coef / (t.kappa[k] * range) * kAcLevels),
                                       long(-kAcLevels), long(kAcLevels));
                    r.packed |= std::uint32_t(q + kAcLevels) << (7 + 5 * (k - 1));
                }
                records.push_back(r);
            }
    DctBlockTexture out(w, h, ch, std::move(records));
    out.set_address_mode(tex.address_mode());
    return out;
}

void store_dct(const DctBlockTexture &dct, const std::filesystem::path &path) {
    detail::ByteWriter w;
    w.magic("STXD");
    w.u32(kDctVersion);
    w.u32(std::uint32_t(dct.width()));
    w.u32(std::uint32_t(dct.height()));
    w.u32(std::uint32_t(dct.channels()));
    for (const DctBlockRecord &r : dct.records()) {
        w.f32(r.lo);
        w.f32(r.hi);
        w.u32(r.packed);
    }
    w.save(path);
}

DctBlockTexture load_dct(const std::filesystem::path &path) {
    detail::ByteReader r(path);
    r.expect_magic("STXD", "DCT texture");
    std::uint64_t at = r.offset();
    if (std::uint32_t v = r.u32("version"); v != kDctVersion)
        throw IoError("unsupported DCT texture version " + std::to_string(v), at);
    at = r.offset();
    std::uint32_t w = r.u32("width"), h = r.u32("height");
    if (w < 1 || h < 1 || w > 65536 || h > 65536)
        throw IoError("DCT texture dimensions out of range", at);
    at = r.offset();
    std::uint32_t ch = r.u32("channels");
    if (ch < 1 || ch > 4)
        throw IoError("DCT texture channel count out of range", at);
    std::size_t n = std::size_t((w + 7) / 8) * ((h + 7) / 8) * ch;
    std::vector<DctBlockRecord> records(n);
    for (auto &rec : records) {
        rec.lo = r.f32("block range");
        rec.hi = r.f32("block range");
        rec.packed = r.u32("block coefficients");
        if (!std::isfinite(rec.lo) || !std::isfinite(rec.hi) || rec.hi < rec.lo)
            throw IoError("invalid block range", r.offset() - 12);
    }
    if (r.remaining() != 0)
        throw IoError("trailing bytes after DCT payload", r.offset());
    return DctBlockTexture(int(w), int(h), int(ch), std::move(records));
}

DctLookup filter_over_dct(const DctBlockTexture &dct, const FilterQuery2D &q,
                          const FilterSettings &f, Estimator e, RngStream *rng) {
    if (needs_pyramid(f.kind) && f.kind != FilterKind::Ewa)
        throw ParameterError("filter_over_dct: DCT textures have no MIP levels");
    FetchCounter counter;
    DctLookup out;
    if (e == Estimator::Deterministic) {
        TapList taps = reference_taps(f, e, q, 1);
        out.value = apply_taps(dct, taps, counter);
    } else {
        if (!rng)
            throw ParameterError("filter_over_dct: stochastic lookup needs an RngStream");
        TapSet taps = stochastic_taps(f, e, q, 1, *rng);
        out.value = apply_taps(dct, taps.view(), counter);
    }
    out.decodes = counter.decode_count;
    return out;
}

} // namespace stochtex
