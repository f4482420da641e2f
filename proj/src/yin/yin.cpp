// SPDX-License-Identifier: Apache-2.0
#include "vox/yin.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace vox::yin {

void YinConfig::validate() const {
    if (!(0 < tau_min && tau_min < tau_max && tau_max < window)) {
        throw ConfigError("yin: require 0 < tau_min < tau_max < window");
    }
    if (hop < 1) throw ConfigError("yin: hop must be >= 1");
    if (sample_rate < 1) throw ConfigError("yin: sample rate must be positive");
}

MidiLagGrid build_grid(const YinConfig& cfg) {
    cfg.validate();
    const double sr = cfg.sample_rate;
    // c(m) decreases with m, so the admissible indices form one interval.
    const double midi_lo = hz_to_midi(sr / cfg.tau_max);
    const double midi_hi = hz_to_midi(sr / cfg.tau_min);
    auto k = static_cast<int>(std::floor(midi_lo * kBinsPerSemitone)) - 1;
    while (midi_to_lag(static_cast<double>(k) / kBinsPerSemitone, sr) > cfg.tau_max) ++k;
    auto last = static_cast<int>(std::ceil(midi_hi * kBinsPerSemitone)) + 1;
    while (midi_to_lag(static_cast<double>(last) / kBinsPerSemitone, sr) < cfg.tau_min) --last;
    if (last < k) throw ConfigError("yin: lag range admits no grid bins");
    return MidiLagGrid{k, last - k + 1, sr};
}

Scope default_scope(const MidiLagGrid& grid) {
    int lo = 0;
    while (lo < grid.size && grid.frequency(lo) < kScopeMinHz) ++lo;
    int hi = grid.size - 1;
    while (hi >= 0 && grid.frequency(hi) > kScopeMaxHz) --hi;
    if (lo > hi) throw ConfigError("yin: grid does not cover the default scope");
    return {lo, hi};
}

Scope scope_shift(const Scope& s, double semitones, const MidiLagGrid& grid) {
    if (!std::isfinite(semitones)) throw RangeError("scope_shift: shift must be finite");
    const auto bins = static_cast<int>(std::lround(kBinsPerSemitone * semitones));
    const Scope out{s.lo_bin - bins, s.hi_bin - bins};
    if (out.lo_bin < 0 || out.hi_bin >= grid.size) {
        // Pitch up moves the scope down: the lower edge bounds upward shifts.
        const double max_up = static_cast<double>(s.lo_bin) / kBinsPerSemitone;
        const double max_down = static_cast<double>(grid.size - 1 - s.hi_bin) / kBinsPerSemitone;
        std::ostringstream msg;
        msg << "scope_shift: " << semitones << " semitones leaves the grid; legal shifts are ["
            << -max_down << ", " << max_up << "]";
        throw RangeError(msg.str());
    }
    return out;
}

FeatureMatrix scope_extract(const FeatureMatrix& f, const Scope& s) {
    if (f.kind != FeatureKind::yingram) throw TypeError("scope_extract: expected a yingram matrix");
    if (s.lo_bin > s.hi_bin) throw BoundsError("scope_extract: lo_bin > hi_bin");
    if (s.lo_bin < 0 || s.hi_bin >= f.cols()) throw BoundsError("scope_extract: scope outside the grid");
    FeatureMatrix out = f;
    out.data = f.data.middleCols(s.lo_bin, s.width());
    return out;
}

Eigen::VectorXd yingram_frame(const Eigen::Ref<const Eigen::VectorXd>& cmnd_frame, const MidiLagGrid& grid) {
    Eigen::VectorXd y(grid.size);
    for (int b = 0; b < grid.size; ++b) {
        const double c = grid.lag(b);
        const double lo = std::floor(c);
        const double hi = std::ceil(c);
        if (lo < 0 || hi >= static_cast<double>(cmnd_frame.size())) {
            throw BoundsError("yingram_frame: lag " + std::to_string(c) + " outside the CMND frame");
        }
        const double d_lo = cmnd_frame(static_cast<Eigen::Index>(lo));
        if (hi == lo) {
            y(b) = d_lo;
        } else {
            const double d_hi = cmnd_frame(static_cast<Eigen::Index>(hi));
            y(b) = (d_hi - d_lo) / (hi - lo) * (c - lo) + d_lo;
        }
    }
    return y;
}

Eigen::Index frame_count(Eigen::Index length, int hop) {
    if (hop < 1) throw ConfigError("frame_count: hop must be >= 1");
    return (length + hop - 1) / hop;
}

Eigen::VectorXd cut_frame(const Samples& samples, Eigen::Index t, const YinConfig& cfg) {
    const Eigen::Index span = cfg.frame_span();
    const Eigen::Index start = t * cfg.hop;
    Eigen::VectorXd frame = Eigen::VectorXd::Zero(span);
    const Eigen::Index n = std::clamp<Eigen::Index>(samples.size() - start, 0, span);
    if (n > 0) frame.head(n) = samples.segment(start, n).cast<double>();
    return frame;
}

namespace {

FeatureMatrix empty_like(FeatureKind kind, const YinConfig& cfg, Eigen::Index rows, Eigen::Index cols) {
    FeatureMatrix f;
    f.kind = kind;
    f.hop = cfg.hop;
    f.sample_rate = cfg.sample_rate;
    f.data.resize(rows, cols);
    return f;
}

void check_rate(const Waveform& w, const YinConfig& cfg) {
    cfg.validate();
    if (w.sample_rate != cfg.sample_rate) {
        throw ConfigError("yin: waveform rate " + std::to_string(w.sample_rate) + " != config rate " +
                          std::to_string(cfg.sample_rate));
    }
}

}  // namespace

FeatureMatrix cmnd_matrix(const Waveform& w, const YinConfig& cfg) {
    check_rate(w, cfg);
    const Eigen::Index frames = frame_count(w.size(), cfg.hop);
    FeatureMatrix out = empty_like(FeatureKind::cmnd, cfg, frames, cfg.tau_max + 1);
    DifferenceFft<double> diff(cfg.window, cfg.tau_max);
    for (Eigen::Index t = 0; t < frames; ++t) {
        out.data.row(t) = cmnd(diff(cut_frame(w.samples, t, cfg))).cast<float>().transpose();
    }
    return out;
}

FeatureMatrix yingram(const Waveform& w, const YinConfig& cfg) {
    check_rate(w, cfg);
    const MidiLagGrid grid = build_grid(cfg);
    const Eigen::Index frames = frame_count(w.size(), cfg.hop);
    FeatureMatrix out = empty_like(FeatureKind::yingram, cfg, frames, grid.size);
    DifferenceFft<double> diff(cfg.window, cfg.tau_max);
    for (Eigen::Index t = 0; t < frames; ++t) {
        const Eigen::VectorXd dn = cmnd(diff(cut_frame(w.samples, t, cfg)));
        out.data.row(t) = yingram_frame(dn, grid).cast<float>().transpose();
    }
    return out;
}

FeatureMatrix yin_f0(const Waveform& w, const YinConfig& cfg, double threshold) {
    check_rate(w, cfg);
    const Eigen::Index frames = frame_count(w.size(), cfg.hop);
    FeatureMatrix out = empty_like(FeatureKind::f0, cfg, frames, 1);
    DifferenceFft<double> diff(cfg.window, cfg.tau_max);
    const Eigen::Index span = cfg.frame_span();
    for (Eigen::Index t = 0; t < frames; ++t) {
        // Zero padding biases the lag estimate, so tail frames reuse the
        // last span that lies fully inside the signal.
        Eigen::VectorXd frame;
        if (w.size() >= span && t * cfg.hop + span > w.size()) {
            frame = w.samples.tail(span).cast<double>();
        } else {
            frame = cut_frame(w.samples, t, cfg);
        }
        const Eigen::VectorXd dn = cmnd(diff(frame));
        int tau = cfg.tau_min;
        while (tau <= cfg.tau_max && dn(tau) >= threshold) ++tau;
        if (tau > cfg.tau_max) {
            out.data(t, 0) = 0.0f;
            continue;
        }
        while (tau + 1 <= cfg.tau_max && dn(tau + 1) < dn(tau)) ++tau;
        double refined = tau;
        if (tau > 0 && tau < cfg.tau_max) {
            const double a = dn(tau - 1), b = dn(tau), c = dn(tau + 1);
            const double denom = a - 2.0 * b + c;
            if (denom > 0.0) refined = tau + 0.5 * (a - c) / denom;
        }
        out.data(t, 0) = static_cast<float>(cfg.sample_rate / refined);
    }
    return out;
}

double principal_dip(const Eigen::Ref<const Eigen::VectorXd>& row, const MidiLagGrid& grid, int first_bin,
                     double threshold) {
    const auto n = static_cast<int>(row.size());
    int i = n - 1;
    while (i >= 0 && row(i) >= threshold) --i;
    if (i < 0) return std::numeric_limits<double>::quiet_NaN();
    while (i > 0 && row(i - 1) < row(i)) --i;

    // Linear interpolation puts the discrete minimum on an integer lag, so
    // fit a parabola across about three lags worth of bins around it.
    const double lag = grid.lag(first_bin + i);
    const double bins_per_lag = 12.0 * kBinsPerSemitone / (std::numbers::ln2 * lag);
    const int half = std::max(2, static_cast<int>(std::lround(1.5 * bins_per_lag)));
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    if (hi - lo < 2) return first_bin + i;

    Eigen::MatrixXd design(hi - lo + 1, 3);
    Eigen::VectorXd rhs(hi - lo + 1);
    for (int k = lo; k <= hi; ++k) {
        const double x = k - i;
        design.row(k - lo) << x * x, x, 1.0;
        rhs(k - lo) = row(k);
    }
    const Eigen::Vector3d p = design.colPivHouseholderQr().solve(rhs);
    if (!(p(0) > 0.0)) return first_bin + i;
    const double vertex = -p(1) / (2.0 * p(0));
    if (std::abs(vertex) > half) return first_bin + i;
    return first_bin + i + vertex;
}

}  // namespace vox::yin
