// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <cstdint>

namespace stochtex {

// Counter-based uniform stream. The stream key is derived by hashing the
// seed with (pixel, sample, dimension); the i-th value is a hash of the key
// and i, so streams can be created anywhere without shared state and the
// same keys always reproduce the same sequence.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed = 0, std::uint64_t pixel = 0, std::uint64_t sample = 0,
                       std::uint64_t dimension = 0);

    // A new stream sharing this stream's seed.
    RngStream derive(std::uint64_t pixel, std::uint64_t sample,
                     std::uint64_t dimension = 0) const {
        return RngStream(seed_, pixel, sample, dimension);
    }

    std::uint64_t next_u64();

    // Uniform double in [0,1) with 53 random bits.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t position() const { return counter_; }
    void advance(std::uint64_t n) { counter_ += n; }

  private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace stochtex
