// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stochtex {

// Raised for invalid kernel, filter or sampler parameters.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Raised by file readers and writers. offset() is the byte position in the
// file where the problem was detected (0 when not applicable).
class IoError : public std::runtime_error {
  public:
    IoError(const std::string &what, std::uint64_t offset = 0)
        : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::uint64_t offset() const { return offset_; }

  private:
    std::uint64_t offset_;
};

// Integer texel coordinate. 2D textures use z == 0.
struct Coord {
    int x = 0, y = 0, z = 0;
    auto operator<=>(const Coord &) const = default;
};

// A texel value with up to four channels. Unused channels stay zero.
struct Texel {
    std::array<double, 4> c{};

    double &operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }

    Texel &operator+=(const Texel &o) {
        for (int i = 0; i < 4; ++i)
            c[i] += o.c[i];
        return *this;
    }
    Texel &operator-=(const Texel &o) {
        for (int i = 0; i < 4; ++i)
            c[i] -= o.c[i];
        return *this;
    }
    Texel &operator*=(double s) {
        for (double &v : c)
            v *= s;
        return *this;
    }
    friend Texel operator+(Texel a, const Texel &b) { return a += b; }
    friend Texel operator-(Texel a, const Texel &b) { return a -= b; }
    friend Texel operator*(Texel a, double s) { return a *= s; }
    friend Texel operator*(double s, Texel a) { return a *= s; }
    bool operator==(const Texel &) const = default;

    static Texel splat(double v) { return Texel{{v, v, v, v}}; }
};

// Counts texel reads and compressed-block decodes. Estimators take one by
// reference; parallel workers keep their own and merge with +=.
struct FetchCounter {
    std::uint64_t count = 0;
    std::uint64_t decode_count = 0;

    FetchCounter &operator+=(const FetchCounter &o) {
        count += o.count;
        decode_count += o.decode_count;
        return *this;
    }
};

} // namespace stochtex
