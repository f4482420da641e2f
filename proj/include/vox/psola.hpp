// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "vox/types.hpp"
#include "vox/yin.hpp"

namespace vox::psola {

/// Pitch marks: strictly increasing sample positions, one voicing flag each.
struct PitchMarks {
    std::vector<Eigen::Index> positions;
    std::vector<bool> voiced;

    [[nodiscard]] std::size_t size() const { return positions.size(); }
    [[nodiscard]] bool any_voiced() const;
};

// Voiced marks are only placed for f0 in this range.
inline constexpr double kMinVoicedHz = 50.0;
inline constexpr double kMaxVoicedHz = 1000.0;
inline constexpr double kUnvoicedSpacingSeconds = 0.010;

/// Voiced marks sit on waveform maxima, each searched within +-20% of the
/// local period after the previous one; unvoiced stretches get uniform 10 ms
/// marks. `f0` must come from yin_f0 at the waveform's rate; `window` is the
/// yin window used to locate frame centres.
PitchMarks estimate_pitch_marks(const Waveform& w, const FeatureMatrix& f0, int window = 2048);

/// f0 track of a waveform at its own rate with the default yin settings.
FeatureMatrix track_f0(const Waveform& w);

/// Median of the voiced (non-zero) entries of an f0 track, 0 if none.
double median_voiced_f0(const FeatureMatrix& f0);

/// Target pitch factor for a mark given its local f0.
using PitchMap = std::function<double(double f0)>;

/// Generic TD-PSOLA resynthesis: output time t reads analysis time
/// t / time_ratio; voiced grains are re-spaced by the pitch map. The result
/// has exactly `out_length` samples.
Eigen::VectorXd synthesize(const Eigen::Ref<const Eigen::VectorXd>& x, const PitchMarks& marks,
                           double sample_rate, double time_ratio, const PitchMap& pitch,
                           Eigen::Index out_length);

/// Scales f0 by `ratio`. With preserve_formants the envelope is kept by
/// grain re-spacing; without it the signal is time stretched and resampled
/// so formants move with the pitch.
Waveform psola_pitch_shift(const Waveform& w, double ratio, bool preserve_formants = true,
                           Diagnostics* diag = nullptr);

/// Changes duration by `ratio` (output length round(len * ratio)), f0 kept.
/// ratio must lie in [0.25, 4].
Waveform psola_time_stretch(const Waveform& w, double ratio, Diagnostics* diag = nullptr);

}  // namespace vox::psola
