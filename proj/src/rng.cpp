// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/rng.h>

namespace stochtex {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t pixel, std::uint64_t sample,
                     std::uint64_t dimension)
    : seed_(seed) {
    std::uint64_t k = mix64(seed + kGolden);
    k = mix64(k ^ (pixel + 0x632be59bd9b4e019ull));
    k = mix64(k ^ (sample + 0x8cb92ba72f3d8dd7ull));
    key_ = mix64(k ^ (dimension + 0xd1b54a32d192ed03ull));
}

std::uint64_t RngStream::next_u64() {
    std::uint64_t c = ++counter_;
    return mix64(key_ + c * kGolden);
}

} // namespace stochtex
