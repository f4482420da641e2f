// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "vox/types.hpp"

namespace vox {

/// NSYF layout (all little-endian):
///   "NSYF" | u8 version=1 | u8 kind | u32 sample_rate | u32 hop | u32 rows | u32 cols
/// followed by rows*cols IEEE-754 float32 values in row-major order.
inline constexpr std::size_t kTensorHeaderSize = 22;
inline constexpr std::uint8_t kTensorVersion = 1;

std::vector<unsigned char> tensor_encode(const FeatureMatrix& f);
FeatureMatrix tensor_decode(const std::vector<unsigned char>& bytes);

void tensor_write(const FeatureMatrix& f, const std::filesystem::path& path);
FeatureMatrix tensor_read(const std::filesystem::path& path);

}  // namespace vox
