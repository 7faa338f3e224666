// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

// Little-endian readers and writers shared by the volume and DCT formats.

#include <stochtex/common.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace stochtex::detail {

class ByteReader {
  public:
    explicit ByteReader(const std::filesystem::path &path) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open " + path.string(), 0);
        bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    std::uint64_t offset() const { return pos_; }
    std::uint64_t remaining() const { return bytes_.size() - pos_; }

    void expect_magic(const char magic[4], const std::string &what) {
        need(4, what + " magic");
        if (std::memcmp(bytes_.data() + pos_, magic, 4) != 0)
            throw IoError(what + ": bad magic", pos_);
        pos_ += 4;
    }

    std::uint32_t u32(const std::string &what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i)
            v = (v << 8) | static_cast<unsigned char>(bytes_[pos_ + i]);
        pos_ += 4;
        return v;
    }

    float f32(const std::string &what) { return std::bit_cast<float>(u32(what)); }

  private:
    void need(std::uint64_t n, const std::string &what) {
        if (remaining() < n)
            throw IoError("truncated file while reading " + what, pos_);
    }

    std::vector<char> bytes_;
    std::uint64_t pos_ = 0;
};

class ByteWriter {
  public:
    void magic(const char m[4]) { bytes_.insert(bytes_.end(), m, m + 4); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i)
            bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

    void save(const std::filesystem::path &path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + path.string() + " for writing", 0);
        out.write(bytes_.data(), std::streamsize(bytes_.size()));
        if (!out)
            throw IoError("write failed for " + path.string(), bytes_.size());
    }

  private:
    std::vector<char> bytes_;
};

} // namespace stochtex::detail
