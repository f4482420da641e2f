// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <vector>

#include "vox/types.hpp"

namespace vox {

/// Binary P5 image: x = frame, y = channel with channel 0 on the bottom row,
/// min-max normalized to 0..255 (all zero when the matrix is constant).
std::vector<unsigned char> pgm_encode(const FeatureMatrix& f);
void pgm_render(const FeatureMatrix& f, const std::filesystem::path& path);

}  // namespace vox
