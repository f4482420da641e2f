// SPDX-License-Identifier: Apache-2.0
#include "vox/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "vox/error.hpp"
#include "vox/fft.hpp"
#include "vox/yin.hpp"

namespace vox::spectral {

void MelConfig::validate() const {
    if (n_fft < 2 || win < 1 || win > n_fft) throw ConfigError("mel: require 1 <= win <= n_fft");
    if (hop < 1) throw ConfigError("mel: hop must be >= 1");
    if (n_mels < 1) throw ConfigError("mel: n_mels must be >= 1");
    if (sample_rate < 1) throw ConfigError("mel: sample rate must be positive");
    if (!(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0)) {
        throw ConfigError("mel: require 0 <= fmin < fmax <= sample_rate / 2");
    }
    if (!(floor > 0.0)) throw ConfigError("mel: log floor must be positive");
}

namespace {
constexpr double kLinearStep = 200.0 / 3.0;  // Hz per mel below the break
constexpr double kBreakHz = 1000.0;
constexpr double kBreakMel = kBreakHz / kLinearStep;
const double kLogStep = std::log(6.4) / 27.0;
}  // namespace

double hz_to_mel(double hz) {
    if (hz < kBreakHz) return hz / kLinearStep;
    return kBreakMel + std::log(hz / kBreakHz) / kLogStep;
}

double mel_to_hz(double mel) {
    if (mel < kBreakMel) return mel * kLinearStep;
    return kBreakHz * std::exp(kLogStep * (mel - kBreakMel));
}

Eigen::VectorXd analysis_window(const MelConfig& cfg) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(cfg.n_fft);
    const int offset = (cfg.n_fft - cfg.win) / 2;
    for (int i = 0; i < cfg.win; ++i) {
        w(offset + i) = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / cfg.win);
    }
    return w;
}

namespace {

// Reflect about the end samples (no edge repeat), folding as often as needed.
Eigen::Index reflect(Eigen::Index i, Eigen::Index n) {
    if (n == 1) return 0;
    const Eigen::Index period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

}  // namespace

RowMatrixXd stft_mag(const Waveform& w, const MelConfig& cfg) {
    cfg.validate();
    if (w.size() == 0) throw DomainError("stft: empty input");
    if (w.sample_rate != cfg.sample_rate) throw ConfigError("stft: waveform rate does not match config");

    const Eigen::Index n = w.size();
    const Eigen::Index frames = n / cfg.hop + 1;
    const Eigen::Index bins = cfg.n_fft / 2 + 1;
    const Eigen::Index pad = cfg.n_fft / 2;
    const Eigen::VectorXd window = analysis_window(cfg);
    RealFft<double> fft(cfg.n_fft);

    RowMatrixXd mag(frames, bins);
    Eigen::VectorXd frame(cfg.n_fft);
    for (Eigen::Index t = 0; t < frames; ++t) {
        const Eigen::Index start = t * cfg.hop - pad;
        for (Eigen::Index i = 0; i < cfg.n_fft; ++i) frame(i) = w.samples(reflect(start + i, n));
        mag.row(t) = fft.forward(frame.cwiseProduct(window)).cwiseAbs().transpose();
    }
    return mag;
}

namespace {

Eigen::MatrixXd build_filterbank(const MelConfig& cfg) {
    const Eigen::Index bins = cfg.n_fft / 2 + 1;
    const double mel_lo = hz_to_mel(cfg.fmin);
    const double mel_hi = hz_to_mel(cfg.fmax);
    Eigen::VectorXd edges(cfg.n_mels + 2);
    for (int i = 0; i < cfg.n_mels + 2; ++i) {
        edges(i) = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));
    }
    Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(cfg.n_mels, bins);
    for (int m = 0; m < cfg.n_mels; ++m) {
        const double left = edges(m), centre = edges(m + 1), right = edges(m + 2);
        const double norm = 2.0 / (right - left);
        for (Eigen::Index k = 0; k < bins; ++k) {
            const double hz = static_cast<double>(k) * cfg.sample_rate / cfg.n_fft;
            const double rise = (hz - left) / (centre - left);
            const double fall = (right - hz) / (right - centre);
            fb(m, k) = norm * std::max(0.0, std::min(rise, fall));
        }
    }
    return fb;
}

}  // namespace

const Eigen::MatrixXd& mel_filterbank(const MelConfig& cfg) {
    cfg.validate();
    using Key = std::tuple<int, int, int, double, double>;
    static std::mutex mutex;
    static std::map<Key, std::unique_ptr<const Eigen::MatrixXd>> cache;
    const Key key{cfg.n_fft, cfg.n_mels, cfg.sample_rate, cfg.fmin, cfg.fmax};
    std::lock_guard lock(mutex);
    auto& slot = cache[key];
    if (!slot) slot = std::make_unique<const Eigen::MatrixXd>(build_filterbank(cfg));
    return *slot;
}

FeatureMatrix log_mel(const Waveform& w, const MelConfig& cfg) {
    const RowMatrixXd mag = stft_mag(w, cfg);
    const Eigen::Index frames = std::min<Eigen::Index>(mag.rows(), yin::frame_count(w.size(), cfg.hop));
    const Eigen::MatrixXd& fb = mel_filterbank(cfg);

    const RowMatrixXd power = mag.topRows(frames).array().square().matrix();
    const RowMatrixXd mel = power * fb.transpose();

    FeatureMatrix out;
    out.kind = FeatureKind::mel;
    out.hop = cfg.hop;
    out.sample_rate = cfg.sample_rate;
    out.data = mel.array().max(cfg.floor).log().cast<float>().matrix();
    return out;
}

FeatureMatrix energy(const FeatureMatrix& mel) {
    if (mel.kind != FeatureKind::mel) throw TypeError("energy: expected a mel matrix");
    FeatureMatrix out;
    out.kind = FeatureKind::energy;
    out.hop = mel.hop;
    out.sample_rate = mel.sample_rate;
    out.data = mel.data.cast<double>().rowwise().mean().cast<float>();
    return out;
}

}  // namespace vox::spectral
