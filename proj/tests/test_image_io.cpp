// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/image_io.h>

#include "test_support.h"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include <unistd.h>

using namespace stochtex;
using namespace stochtex::testing;

namespace {

class TempDir : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("stochtex_io_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }
    std::filesystem::path path(const std::string &name) const { return dir_ / name; }

    std::filesystem::path dir_;
};

void append_u32(std::string &s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        s.push_back(char((v >> (8 * i)) & 0xff));
}

void append_f32(std::string &s, float f) {
    std::uint32_t v;
    std::memcpy(&v, &f, 4);
    append_u32(s, v);
}

void write_bytes(const std::filesystem::path &p, const std::string &bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), std::streamsize(bytes.size()));
}

std::string volume_header(std::uint32_t version, std::uint32_t w, std::uint32_t h, std::uint32_t d,
                          std::uint32_t ch) {
    std::string s = "STXV";
    append_u32(s, version);
    append_u32(s, w);
    append_u32(s, h);
    append_u32(s, d);
    append_u32(s, ch);
    return s;
}

template <class Fn>
std::uint64_t io_error_offset(Fn &&fn) {
    try {
        fn();
    } catch (const IoError &e) {
        return e.offset();
    }
    ADD_FAILURE() << "expected IoError";
    return ~0ull;
}

} // namespace

using ImageIo = TempDir;

TEST_F(ImageIo, PfmRoundTripIsBitExact) {
    std::mt19937_64 gen(2);
    TextureGrid g = random_texture(gen, 16, 16, 3);
    store_image(g, path("a.pfm"));
    TextureGrid back = load_image(path("a.pfm"));
    ASSERT_EQ(back.width(), 16);
    ASSERT_EQ(back.height(), 16);
    ASSERT_EQ(back.channels(), 3);
    EXPECT_EQ(std::memcmp(back.data().data(), g.data().data(), g.data().size() * 4), 0);
}

TEST_F(ImageIo, PfmGrayscaleRoundTrip) {
    std::mt19937_64 gen(3);
    TextureGrid g = random_texture(gen, 7, 5, 1);
    store_pfm(g, path("g.pfm"));
    TextureGrid back = load_pfm(path("g.pfm"));
    ASSERT_EQ(back.channels(), 1);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 7; ++x)
            EXPECT_EQ(back.at(x, y, 0), g.at(x, y, 0));
}

TEST_F(ImageIo, PfmRejectsTwoChannels) {
    EXPECT_THROW(store_pfm(TextureGrid(2, 2, 2), path("x.pfm")), IoError);
}

TEST_F(ImageIo, PfmTruncated) {
    std::mt19937_64 gen(3);
    store_pfm(random_texture(gen, 4, 4, 1), path("t.pfm"));
    auto size = std::filesystem::file_size(path("t.pfm"));
    std::filesystem::resize_file(path("t.pfm"), size - 6);
    EXPECT_THROW(load_pfm(path("t.pfm")), IoError);
}

TEST_F(ImageIo, PngGray128DecodesToLinear) {
    TextureGrid g(3, 2, 1, std::vector<float>(6, 128.0f / 255.0f));
    g.set_color_space(ColorSpace::SRGBEncoded);
    store_png(g, path("g.png"));
    TextureGrid back = load_png(path("g.png"));
    double c = 128.0 / 255.0;
    double expected = std::pow((c + 0.055) / 1.055, 2.4);
    EXPECT_NEAR(back.at(1, 1, 0), expected, 1e-6);
    EXPECT_NEAR(back.at(1, 1, 0), 0.2158, 1e-4);
    TextureGrid raw = load_png(path("g.png"), {.raw = true});
    EXPECT_NEAR(raw.at(0, 0, 0), c, 1e-7);
}

TEST_F(ImageIo, PngLinearRoundTripWithinQuantization) {
    std::mt19937_64 gen(4);
    TextureGrid g = random_texture(gen, 9, 6, 4);
    store_png(g, path("c16.png"), 16);
    TextureGrid back = load_png(path("c16.png"));
    ASSERT_EQ(back.channels(), 4);
    for (std::size_t i = 0; i < g.data().size(); ++i)
        EXPECT_NEAR(back.data()[i], g.data()[i], 2e-4) << i;
    store_png(g, path("c8.png"), 8);
    TextureGrid back8 = load_png(path("c8.png"));
    for (std::size_t i = 0; i < g.data().size(); ++i)
        EXPECT_NEAR(back8.data()[i], g.data()[i], 0.02) << i;
}

TEST_F(ImageIo, PngBadSignature) {
    write_bytes(path("bad.png"), "not a png at all");
    EXPECT_THROW(load_png(path("bad.png")), IoError);
}

TEST_F(ImageIo, PngTruncated) {
    std::mt19937_64 gen(5);
    store_png(random_texture(gen, 32, 32, 3), path("t.png"));
    std::filesystem::resize_file(path("t.png"), 60);
    EXPECT_THROW(load_png(path("t.png")), IoError);
}

TEST_F(ImageIo, UnknownExtension) {
    EXPECT_THROW(load_image(path("x.bmp")), IoError);
}

TEST_F(ImageIo, VolumeRoundTrip) {
    std::mt19937_64 gen(6);
    TextureGrid v = random_volume(gen, 5, 4, 3, 2);
    store_volume(v, path("v.stxv"));
    TextureGrid back = load_volume(path("v.stxv"));
    EXPECT_EQ(back.dims(), v.dims());
    EXPECT_EQ(back.channels(), 2);
    EXPECT_EQ(std::memcmp(back.data().data(), v.data().data(), v.data().size() * 4), 0);
}

TEST_F(ImageIo, VolumeHandWrittenAccepted) {
    std::string s = volume_header(1, 8, 8, 8, 1);
    for (int i = 0; i < 512; ++i)
        append_f32(s, float(i));
    write_bytes(path("ok.stxv"), s);
    TextureGrid v = load_volume(path("ok.stxv"));
    EXPECT_EQ(v.dims(), (std::array<int, 3>{8, 8, 8}));
    EXPECT_EQ(v.at(1, 2, 3, 0), float(3 * 64 + 2 * 8 + 1));
}

TEST_F(ImageIo, VolumeBadMagic) {
    std::string s = volume_header(1, 1, 1, 1, 1);
    s[0] = 'X';
    append_f32(s, 0);
    write_bytes(path("m.stxv"), s);
    EXPECT_EQ(io_error_offset([&] { load_volume(path("m.stxv")); }), 0u);
}

TEST_F(ImageIo, VolumeBadVersion) {
    std::string s = volume_header(2, 1, 1, 1, 1);
    append_f32(s, 0);
    write_bytes(path("v.stxv"), s);
    EXPECT_EQ(io_error_offset([&] { load_volume(path("v.stxv")); }), 4u);
}

TEST_F(ImageIo, VolumeDimensionOverflow) {
    write_bytes(path("o.stxv"), volume_header(1, 8, 100000, 8, 1));
    EXPECT_EQ(io_error_offset([&] { load_volume(path("o.stxv")); }), 12u);
    write_bytes(path("z.stxv"), volume_header(1, 8, 8, 0, 1));
    EXPECT_EQ(io_error_offset([&] { load_volume(path("z.stxv")); }), 16u);
}

TEST_F(ImageIo, VolumeBadChannels) {
    write_bytes(path("c.stxv"), volume_header(1, 2, 2, 2, 7));
    EXPECT_EQ(io_error_offset([&] { load_volume(path("c.stxv")); }), 20u);
}

TEST_F(ImageIo, VolumeTruncatedPayload) {
    std::string s = volume_header(1, 2, 2, 2, 1);
    for (int i = 0; i < 7; ++i)
        append_f32(s, 1.0f);
    write_bytes(path("t.stxv"), s);
    // Reported where the data runs out.
    EXPECT_EQ(io_error_offset([&] { load_volume(path("t.stxv")); }), 52u);
}

TEST_F(ImageIo, VolumeTrailingBytes) {
    std::string s = volume_header(1, 1, 1, 1, 1);
    append_f32(s, 1.0f);
    s += "xx";
    write_bytes(path("x.stxv"), s);
    EXPECT_EQ(io_error_offset([&] { load_volume(path("x.stxv")); }), 28u);
}

TEST_F(ImageIo, VolumeHeaderTruncated) {
    write_bytes(path("h.stxv"), "STXV\x01");
    EXPECT_THROW(load_volume(path("h.stxv")), IoError);
}

TEST_F(ImageIo, MissingFile) {
    EXPECT_THROW(load_volume(path("nope.stxv")), IoError);
    EXPECT_THROW(load_image(path("nope.png")), IoError);
    EXPECT_THROW(load_image(path("nope.pfm")), IoError);
}
