// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

// Procedural test assets, generated bit-identically on every run.

#include <stochtex/texture.h>

#include <string_view>
#include <vector>

namespace stochtex {

// Cloud-like density in [0, 1]: a few overlapping Gaussian lobes modulated
// by hashed value noise. One channel, n^3 voxels.
TextureGrid make_puff_volume(int n = 64);

// Square cells of `cell` texels alternating between 0.1 and 1.0.
TextureGrid make_checker_image(int size = 256, int cell = 4);

// Same layout, but bright cells ramp from 0.1 at the left edge to 1.0 at
// the right, so contrast grows along x.
TextureGrid make_ramp_image(int size = 256, int cell = 4);

// "puff", "checker" or "ramp" at default size. Throws ParameterError.
TextureGrid make_fixture(std::string_view name);
std::vector<std::string_view> fixture_names();

} // namespace stochtex
