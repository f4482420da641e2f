// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace vox {

using Samples = Eigen::VectorXf;
using RowMatrixXf = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Mono audio at a fixed integer sample rate.
struct Waveform {
    Samples samples;
    int sample_rate = 22050;

    Waveform() = default;
    Waveform(Samples s, int rate) : samples(std::move(s)), sample_rate(rate) {}

    [[nodiscard]] Eigen::Index size() const { return samples.size(); }
    [[nodiscard]] double duration() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

/// On-disk kind codes are the enumerator values.
enum class FeatureKind : std::uint8_t { yingram = 0, cmnd = 1, mel = 2, energy = 3, f0 = 4 };

std::string_view to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(std::string_view name);

inline constexpr int kMelBands = 80;

/// Frames x channels feature matrix plus the framing it was computed with.
struct FeatureMatrix {
    FeatureKind kind = FeatureKind::mel;
    int hop = 256;
    int sample_rate = 22050;
    RowMatrixXf data;

    [[nodiscard]] Eigen::Index rows() const { return data.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return data.cols(); }

    /// Throws FormatError when the kind/shape/finiteness invariants fail.
    void validate() const;
};

/// Non-fatal conditions collected by a transform (clipping, passthroughs).
struct Diagnostics {
    std::vector<std::string> warnings;
    std::size_t clipped = 0;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
};

/// Hard-clips to [-1, 1] in place and returns the number of clipped samples.
std::size_t hard_clip(Samples& samples);

/// hard_clip that records the count (and a warning) in `diag` when given.
void clip_output(Samples& samples, Diagnostics* diag);

}  // namespace vox
