// SPDX-License-Identifier: Apache-2.0
#include "vox/types.hpp"

#include <array>
#include <string>

#include "vox/error.hpp"

namespace vox {

namespace {
constexpr std::array<std::string_view, 5> kKindNames = {"yingram", "cmnd", "mel", "energy", "f0"};
}

std::string_view to_string(FeatureKind kind) {
    return kKindNames.at(static_cast<std::size_t>(kind));
}

FeatureKind feature_kind_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<FeatureKind>(i);
    }
    throw FormatError("unknown feature kind '" + std::string(name) + "'");
}

void FeatureMatrix::validate() const {
    if (static_cast<unsigned>(kind) > static_cast<unsigned>(FeatureKind::f0)) {
        throw FormatError("feature kind out of range");
    }
    if (hop < 1 || sample_rate < 1) throw FormatError("feature hop and sample rate must be positive");
    if (!data.allFinite()) throw FormatError("feature matrix holds non-finite values");
    if (rows() == 0) return;
    if ((kind == FeatureKind::energy || kind == FeatureKind::f0) && cols() != 1) {
        throw FormatError(std::string(to_string(kind)) + " features must have one column");
    }
    if (kind == FeatureKind::mel && cols() != kMelBands) {
        throw FormatError("mel features must have " + std::to_string(kMelBands) + " columns");
    }
}

std::size_t hard_clip(Samples& samples) {
    std::size_t clipped = 0;
    for (auto& s : samples) {
        if (s > 1.0f) {
            s = 1.0f;
            ++clipped;
        } else if (s < -1.0f) {
            s = -1.0f;
            ++clipped;
        }
    }
    return clipped;
}

void clip_output(Samples& samples, Diagnostics* diag) {
    const std::size_t clipped = hard_clip(samples);
    if (diag && clipped > 0) {
        diag->clipped += clipped;
        diag->warn(std::to_string(clipped) + " samples clipped to full scale");
    }
}

}  // namespace vox
