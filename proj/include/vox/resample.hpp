// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vox/types.hpp"

namespace vox {

/// Kaiser-windowed sinc (beta 8.6, 32 taps per phase) polyphase resampler.
/// Output length is round(len * target / source); equal rates return the
/// input unchanged.
Waveform resample(const Waveform& w, int target_rate);

/// Resamples by an arbitrary positive factor: output sample n is the
/// band-limited value of the input at time n / factor. Used when the new
/// rate is not an integer (formant shifting plays audio back faster/slower).
Eigen::VectorXd resample_by(const Eigen::Ref<const Eigen::VectorXd>& x, double factor);

}  // namespace vox
