// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>

#include "vox/types.hpp"

namespace vox {

enum class WavEncoding { pcm16, float32 };

/// Reads 16-bit PCM or 32-bit float RIFF/WAVE; channels are averaged to mono.
/// PCM16 is scaled by 1/32768 so -32768 maps to exactly -1.
Waveform wav_read(const std::filesystem::path& path);

/// Writes a mono file. Samples outside [-1, 1] are hard-clipped; the return
/// value is the number of clipped samples. PCM16 writes x*32768 rounded half
/// away from zero and saturated to 32767, the inverse of the read scaling.
std::size_t wav_write(const Waveform& w, const std::filesystem::path& path,
                      WavEncoding encoding = WavEncoding::float32);

// In-memory variants used by the file functions.
Waveform wav_decode(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> wav_encode(const Waveform& w, WavEncoding encoding,
                                      std::size_t* clipped = nullptr);

}  // namespace vox
