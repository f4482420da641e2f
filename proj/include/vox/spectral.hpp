// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "vox/types.hpp"

namespace vox::spectral {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct MelConfig {
    int n_fft = 1024;
    int win = 1024;
    int hop = 256;
    int n_mels = kMelBands;
    int sample_rate = 22050;
    double fmin = 0.0;
    double fmax = 8000.0;
    double floor = 1e-5;

    void validate() const;
};

// Slaney mel scale: linear below 1 kHz, logarithmic above.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Periodic Hann window of `win` samples centred in an `n_fft` frame.
Eigen::VectorXd analysis_window(const MelConfig& cfg);

/// Centered STFT magnitudes (reflect padding by n_fft/2), one row per frame,
/// floor(len/hop) + 1 rows of n_fft/2 + 1 bins.
RowMatrixXd stft_mag(const Waveform& w, const MelConfig& cfg = {});

/// n_mels x (n_fft/2 + 1) triangular filters with Slaney area normalization.
/// Built once per distinct config and shared afterwards.
const Eigen::MatrixXd& mel_filterbank(const MelConfig& cfg);

/// Natural-log mel power, cropped to ceil(len/hop) frames so rows line up
/// with the yingram.
FeatureMatrix log_mel(const Waveform& w, const MelConfig& cfg = {});

/// Per-frame mean of a log-mel matrix.
FeatureMatrix energy(const FeatureMatrix& mel);

}  // namespace vox::spectral
