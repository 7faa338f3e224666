// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/image_io.h>

#include "binary_io.h"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace stochtex {

namespace {

std::string lower_extension(const std::filesystem::path &path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return ext;
}

constexpr std::uint32_t kMaxDim = 1u << 16;

bool is_color_channel(int c, int channels) {
    // Gray+alpha and RGBA keep alpha linear.
    return !((channels == 2 && c == 1) || (channels == 4 && c == 3));
}

struct FileCloser {
    void operator()(std::FILE *f) const { std::fclose(f); }
};

} // namespace

TextureGrid load_image(const std::filesystem::path &path, const ImageReadOptions &options) {
    std::string ext = lower_extension(path);
    if (ext == ".png")
        return load_png(path, options);
    if (ext == ".pfm")
        return load_pfm(path);
    throw IoError("unsupported image extension '" + ext + "' for " + path.string(), 0);
}

void store_image(const TextureGrid &tex, const std::filesystem::path &path,
                 const ImageWriteOptions &options) {
    std::string ext = lower_extension(path);
    if (ext == ".png")
        return store_png(tex, path, options.png_bit_depth);
    if (ext == ".pfm")
        return store_pfm(tex, path);
    throw IoError("unsupported image extension '" + ext + "' for " + path.string(), 0);
}

// PFM: "PF" (RGB) or "Pf" (gray), width, height, scale (negative means
// little-endian), then float rows from bottom to top.
TextureGrid load_pfm(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string(), 0);
    std::string magic;
    long long w = 0, h = 0;
    double scale = 0;
    in >> magic;
    if (magic != "PF" && magic != "Pf")
        throw IoError("pfm: bad magic in " + path.string(), 0);
    if (!(in >> w >> h))
        throw IoError("pfm: malformed dimensions", std::uint64_t(std::max<long long>(0, in.tellg())));
    if (w <= 0 || h <= 0 || w > kMaxDim || h > kMaxDim)
        throw IoError("pfm: dimension overflow", std::uint64_t(std::max<long long>(0, in.tellg())));
    if (!(in >> scale) || scale == 0)
        throw IoError("pfm: malformed scale", std::uint64_t(std::max<long long>(0, in.tellg())));
    in.get(); // single whitespace before the payload
    std::uint64_t header = std::uint64_t(in.tellg());
    int channels = magic == "PF" ? 3 : 1;
    bool little = scale < 0;

    std::size_t count = std::size_t(w) * std::size_t(h) * channels;
    std::vector<unsigned char> raw(count * 4);
    in.read(reinterpret_cast<char *>(raw.data()), std::streamsize(raw.size()));
    if (std::size_t(in.gcount()) != raw.size())
        throw IoError("pfm: truncated payload", header + std::uint64_t(in.gcount()));

    std::vector<float> data(count);
    for (long long y = 0; y < h; ++y) {
        // File rows run bottom to top.
        std::size_t src_row = std::size_t(h - 1 - y) * std::size_t(w) * channels;
        std::size_t dst_row = std::size_t(y) * std::size_t(w) * channels;
        for (std::size_t i = 0; i < std::size_t(w) * channels; ++i) {
            const unsigned char *b = &raw[(src_row + i) * 4];
            std::uint32_t bits = little ? (std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
                                           std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24)
                                        : (std::uint32_t(b[3]) | std::uint32_t(b[2]) << 8 |
                                           std::uint32_t(b[1]) << 16 | std::uint32_t(b[0]) << 24);
            float v = std::bit_cast<float>(bits);
            if (!std::isfinite(v))
                throw IoError("pfm: non-finite value", header + (src_row + i) * 4);
            data[dst_row + i] = v * float(std::abs(scale));
        }
    }
    return TextureGrid(int(w), int(h), channels, std::move(data));
}

void store_pfm(const TextureGrid &tex, const std::filesystem::path &path) {
    if (tex.dimensions() != 2)
        throw IoError("pfm: only 2D textures can be stored", 0);
    if (tex.channels() != 1 && tex.channels() != 3)
        throw IoError("pfm: only 1 or 3 channels are supported, got " +
                          std::to_string(tex.channels()),
                      0);
    std::ostringstream header;
    header << (tex.channels() == 3 ? "PF" : "Pf") << "\n"
           << tex.width() << " " << tex.height() << "\n-1.0\n";
    std::string out = header.str();
    std::size_t row = std::size_t(tex.width()) * tex.channels();
    auto data = tex.data();
    for (int y = tex.height() - 1; y >= 0; --y)
        for (std::size_t i = 0; i < row; ++i) {
            auto bits = std::bit_cast<std::uint32_t>(data[std::size_t(y) * row + i]);
            for (int k = 0; k < 4; ++k)
                out.push_back(char((bits >> (8 * k)) & 0xff));
        }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open " + path.string() + " for writing", 0);
    f.write(out.data(), std::streamsize(out.size()));
    if (!f)
        throw IoError("pfm: write failed for " + path.string(), 0);
}

TextureGrid load_png(const std::filesystem::path &path, const ImageReadOptions &options) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp)
        throw IoError("cannot open " + path.string(), 0);
    png_byte sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw IoError("png: bad signature in " + path.string(), 0);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png: out of memory", 0);
    }
    std::vector<png_byte> pixels;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        long at = std::ftell(fp.get());
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png: malformed or truncated data in " + path.string(),
                      std::uint64_t(std::max(0L, at)));
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info), h = png_get_image_height(png, info);
    int depth = png_get_bit_depth(png, info);
    int type = png_get_color_type(png, info);
    if (type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (type == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(png);
    if (depth == 16 && std::endian::native == std::endian::little)
        png_set_swap(png);
    png_read_update_info(png, info);

    int channels = png_get_channels(png, info);
    int out_depth = png_get_bit_depth(png, info);
    if (w == 0 || h == 0 || w > kMaxDim || h > kMaxDim) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png: dimension overflow in " + path.string(), 16);
    }
    std::size_t rowbytes = png_get_rowbytes(png, info);
    pixels.resize(rowbytes * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = pixels.data() + y * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    std::vector<float> data(std::size_t(w) * h * channels);
    double maxv = out_depth == 16 ? 65535.0 : 255.0;
    for (png_uint_32 y = 0; y < h; ++y)
        for (png_uint_32 x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c) {
                std::size_t i = (std::size_t(y) * w + x) * channels + c;
                double v;
                if (out_depth == 16) {
                    std::uint16_t s;
                    std::memcpy(&s, rows[y] + (std::size_t(x) * channels + c) * 2, 2);
                    v = s / maxv;
                } else {
                    v = rows[y][std::size_t(x) * channels + c] / maxv;
                }
                if (!options.raw && is_color_channel(c, channels))
                    v = srgb_to_linear(v);
                data[i] = float(v);
            }
    TextureGrid tex(int(w), int(h), channels, std::move(data));
    tex.set_color_space(options.raw ? ColorSpace::SRGBEncoded : ColorSpace::Linear);
    return tex;
}

void store_png(const TextureGrid &tex, const std::filesystem::path &path, int bit_depth) {
    if (tex.dimensions() != 2)
        throw IoError("png: only 2D textures can be stored", 0);
    if (bit_depth != 8 && bit_depth != 16)
        throw IoError("png: bit depth must be 8 or 16", 0);
    int channels = tex.channels();
    int type = channels == 1   ? PNG_COLOR_TYPE_GRAY
               : channels == 2 ? PNG_COLOR_TYPE_GRAY_ALPHA
               : channels == 3 ? PNG_COLOR_TYPE_RGB
                               : PNG_COLOR_TYPE_RGBA;
    int bytes = bit_depth / 8;
    double maxv = bit_depth == 16 ? 65535.0 : 255.0;
    std::size_t rowbytes = std::size_t(tex.width()) * channels * bytes;
    std::vector<png_byte> pixels(rowbytes * tex.height());
    bool encode = tex.color_space() == ColorSpace::Linear;
    for (int y = 0; y < tex.height(); ++y)
        for (int x = 0; x < tex.width(); ++x)
            for (int c = 0; c < channels; ++c) {
                double v = std::clamp(double(tex.at(x, y, c)), 0.0, 1.0);
                if (encode && is_color_channel(c, channels))
                    v = linear_to_srgb(v);
                auto q = static_cast<std::uint32_t>(std::lround(v * maxv));
                png_byte *p = &pixels[std::size_t(y) * rowbytes + (std::size_t(x) * channels + c) * bytes];
                if (bytes == 2) {
                    p[0] = png_byte(q >> 8); // PNG stores 16-bit samples big-endian
                    p[1] = png_byte(q & 0xff);
                } else {
                    p[0] = png_byte(q);
                }
            }

    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp)
        throw IoError("cannot open " + path.string() + " for writing", 0);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png: out of memory", 0);
    }
    std::vector<png_bytep> rows(tex.height());
    for (int y = 0; y < tex.height(); ++y)
        rows[y] = pixels.data() + std::size_t(y) * rowbytes;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png: write failed for " + path.string(), 0);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, tex.width(), tex.height(), bit_depth, type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    if (encode)
        png_set_sRGB(png, info, PNG_sRGB_INTENT_PERCEPTUAL);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

TextureGrid load_volume(const std::filesystem::path &path) {
    detail::ByteReader in(path);
    in.expect_magic("STXV", "volume");
    std::uint32_t version = in.u32("volume version");
    if (version != 1)
        throw IoError("volume: unsupported version " + std::to_string(version), in.offset() - 4);
    std::uint32_t dims[3];
    for (auto &d : dims) {
        d = in.u32("volume dimensions");
        if (d == 0 || d > kMaxDim)
            throw IoError("volume: dimension overflow", in.offset() - 4);
    }
    std::uint32_t channels = in.u32("volume channels");
    if (channels < 1 || channels > 4)
        throw IoError("volume: channel count must be 1-4", in.offset() - 4);
    std::uint64_t count = std::uint64_t(dims[0]) * dims[1] * dims[2] * channels;
    if (count > (std::uint64_t(1) << 34))
        throw IoError("volume: dimension overflow", in.offset() - 16);
    if (in.remaining() < count * 4)
        throw IoError("volume: truncated payload, expected " + std::to_string(count * 4) +
                          " bytes",
                      in.offset() + in.remaining());
    std::vector<float> data(count);
    for (auto &v : data) {
        v = in.f32("volume payload");
        if (!std::isfinite(v))
            throw IoError("volume: non-finite value", in.offset() - 4);
    }
    if (in.remaining() != 0)
        throw IoError("volume: trailing bytes after payload", in.offset());
    return TextureGrid(int(dims[0]), int(dims[1]), int(dims[2]), int(channels), std::move(data));
}

void store_volume(const TextureGrid &tex, const std::filesystem::path &path) {
    detail::ByteWriter out;
    out.magic("STXV");
    out.u32(1);
    out.u32(std::uint32_t(tex.width()));
    out.u32(std::uint32_t(tex.height()));
    out.u32(std::uint32_t(tex.depth()));
    out.u32(std::uint32_t(tex.channels()));
    for (float v : tex.data())
        out.f32(v);
    out.save(path);
}

} // namespace stochtex
