// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/fixtures.h>
#include <stochtex/rng.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace stochtex {

namespace {

// Hash of an integer lattice point to [0, 1).
double lattice(int x, int y, int z, std::uint64_t salt) {
    std::uint64_t h = mix64(salt ^ mix64(std::uint64_t(std::uint32_t(x)) ^
                                         mix64(std::uint64_t(std::uint32_t(y)) ^
                                               mix64(std::uint64_t(std::uint32_t(z))))));
    return double(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3 - 2 * t); }

double value_noise(double x, double y, double z, std::uint64_t salt) {
    int ix = int(std::floor(x)), iy = int(std::floor(y)), iz = int(std::floor(z));
    double fx = smooth(x - ix), fy = smooth(y - iy), fz = smooth(z - iz);
    double v = 0;
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i) {
                double w = (i ? fx : 1 - fx) * (j ? fy : 1 - fy) * (k ? fz : 1 - fz);
                v += w * lattice(ix + i, iy + j, iz + k, salt);
            }
    return v;
}

} // namespace

TextureGrid make_puff_volume(int n) {
    if (n < 2)
        throw ParameterError("make_puff_volume: size must be at least 2");
    struct Lobe {
        double x, y, z, r, a;
    };
    const Lobe lobes[] = {{0.50, 0.45, 0.50, 0.22, 0.9},
                          {0.35, 0.55, 0.40, 0.15, 0.7},
                          {0.65, 0.58, 0.60, 0.16, 0.7},
                          {0.50, 0.70, 0.45, 0.12, 0.5}};
    TextureGrid vol = TextureGrid::volume(n, n, n, 1);
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                double px = (x + 0.5) / n, py = (y + 0.5) / n, pz = (z + 0.5) / n;
                double d = 0;
                for (const Lobe &l : lobes) {
                    double r2 = (px - l.x) * (px - l.x) + (py - l.y) * (py - l.y) +
                                (pz - l.z) * (pz - l.z);
                    d += l.a * std::exp(-r2 / (2 * l.r * l.r));
                }
                double noise = 0.55 * value_noise(px * 8, py * 8, pz * 8, 1) +
                               0.30 * value_noise(px * 16, py * 16, pz * 16, 2) +
                               0.15 * value_noise(px * 32, py * 32, pz * 32, 3);
                vol.at(x, y, z, 0) = float(std::clamp(d * (0.3 + 1.4 * noise) - 0.15, 0.0, 1.0));
            }
    return vol;
}

namespace {

template <class Bright>
TextureGrid cells(int size, int cell, Bright bright) {
    if (size < 1 || cell < 1)
        throw ParameterError("fixture size and cell must be positive");
    TextureGrid img(size, size, 1);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            img.at(x, y, 0) = ((x / cell + y / cell) % 2) ? float(bright(x)) : 0.1f;
    return img;
}

} // namespace

TextureGrid make_checker_image(int size, int cell) {
    return cells(size, cell, [](int) { return 1.0; });
}

TextureGrid make_ramp_image(int size, int cell) {
    return cells(size, cell,
                 [size](int x) { return 0.1 + 0.9 * (size > 1 ? double(x) / (size - 1) : 1.0); });
}

TextureGrid make_fixture(std::string_view name) {
    if (name == "puff")
        return make_puff_volume();
    if (name == "checker")
        return make_checker_image();
    if (name == "ramp")
        return make_ramp_image();
    throw ParameterError("unknown fixture '" + std::string(name) + "'");
}

std::vector<std::string_view> fixture_names() { return {"puff", "checker", "ramp"}; }

} // namespace stochtex
