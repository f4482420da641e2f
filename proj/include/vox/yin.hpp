// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "vox/error.hpp"
#include "vox/fft.hpp"
#include "vox/types.hpp"

namespace vox::yin {

struct YinConfig {
    int window = 2048;
    int tau_min = 22;
    int tau_max = 2047;
    int hop = 256;
    int sample_rate = 22050;

    void validate() const;
    [[nodiscard]] int frame_span() const { return window + tau_max; }
};

inline constexpr int kBinsPerSemitone = 20;
inline constexpr double kMidiStep = 1.0 / kBinsPerSemitone;

/// Default scope edges in Hz; the slice they select is 984 bins wide.
inline constexpr double kScopeMinHz = 25.11;
inline constexpr double kScopeMaxHz = 430.19;

inline double midi_to_hz(double midi) { return 440.0 * std::exp2((midi - 69.0) / 12.0); }
inline double hz_to_midi(double hz) { return 69.0 + 12.0 * std::log2(hz / 440.0); }

/// c(m): the time lag (in samples) of the period of midi note m.
inline double midi_to_lag(double midi, double sample_rate) {
    return sample_rate / midi_to_hz(midi);
}

/// Bins are absolute multiples of 0.05 midi; bin b holds midi
/// (first_index + b) * 0.05, so grids built for different configs overlap
/// bin-for-bin.
struct MidiLagGrid {
    int first_index = 0;
    int size = 0;
    double sample_rate = 22050.0;

    [[nodiscard]] double midi(int bin) const { return (first_index + bin) / static_cast<double>(kBinsPerSemitone); }
    [[nodiscard]] double frequency(int bin) const { return midi_to_hz(midi(bin)); }
    [[nodiscard]] double lag(int bin) const { return midi_to_lag(midi(bin), sample_rate); }
    /// Fractional bin of an arbitrary midi value.
    [[nodiscard]] double bin_of_midi(double m) const { return m * kBinsPerSemitone - first_index; }
};

MidiLagGrid build_grid(const YinConfig& cfg);

/// Inclusive bin range of a grid.
struct Scope {
    int lo_bin = 0;
    int hi_bin = 0;

    [[nodiscard]] int width() const { return hi_bin - lo_bin + 1; }
    friend bool operator==(const Scope&, const Scope&) = default;
};

/// Grid bins whose frequency lies in [kScopeMinHz, kScopeMaxHz].
Scope default_scope(const MidiLagGrid& grid);

/// Moves both edges by -round(20 * semitones) bins; raising pitch moves the
/// scope down. Throws RangeError naming the legal shift interval.
Scope scope_shift(const Scope& s, double semitones, const MidiLagGrid& grid);

/// Column slice [lo_bin, hi_bin] of a yingram matrix.
FeatureMatrix scope_extract(const FeatureMatrix& f, const Scope& s);

/// d(tau) = sum_{j<W} (x_j - x_{j+tau})^2 for tau = 0..tau_max, by direct
/// summation. The frame must hold at least W + tau_max samples.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> difference_direct(
    const Eigen::MatrixBase<Derived>& frame, int window, int tau_max) {
    using Scalar = typename Derived::Scalar;
    if (window < 1 || tau_max < 0 || frame.size() < window + tau_max) {
        throw BoundsError("difference_direct: frame needs " + std::to_string(window + tau_max) +
                          " samples, got " + std::to_string(frame.size()));
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d(tau_max + 1);
    const auto head = frame.head(window);
    for (int tau = 0; tau <= tau_max; ++tau) {
        d(tau) = (head - frame.segment(tau, window)).squaredNorm();
    }
    return d;
}

/// Same contract as difference_direct, via r(0) + r_tau(0) - 2 r(tau) with
/// the cross term computed by FFT. Holds its transform plan for reuse.
template <typename Scalar>
class DifferenceFft {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    DifferenceFft(int window, int tau_max)
        : window_(window), tau_max_(tau_max), fft_(next_pow2(window + tau_max)) {
        if (window < 1 || tau_max < 0) throw ConfigError("DifferenceFft: bad window/tau_max");
    }

    template <typename Derived>
    Vector operator()(const Eigen::MatrixBase<Derived>& frame) {
        const int span = window_ + tau_max_;
        if (frame.size() < span) {
            throw BoundsError("difference_fft: frame needs " + std::to_string(span) +
                              " samples, got " + std::to_string(frame.size()));
        }
        const Vector x = frame.head(span).template cast<Scalar>();
        const auto a = fft_.forward(x.head(window_));
        const auto b = fft_.forward(x);
        const Vector r = fft_.inverse((a.conjugate().array() * b.array()).matrix());

        // prefix[k] = sum_{j<k} x_j^2
        Vector prefix(span + 1);
        prefix(0) = 0;
        for (int k = 0; k < span; ++k) prefix(k + 1) = prefix(k) + x(k) * x(k);

        Vector d(tau_max_ + 1);
        d(0) = 0;
        const Scalar e0 = prefix(window_);
        for (int tau = 1; tau <= tau_max_; ++tau) {
            const Scalar shifted = prefix(tau + window_) - prefix(tau);
            d(tau) = std::max(Scalar(0), e0 + shifted - 2 * r(tau));
        }
        return d;
    }

private:
    int window_;
    int tau_max_;
    RealFft<Scalar> fft_;
};

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> difference_fft(
    const Eigen::MatrixBase<Derived>& frame, int window, int tau_max) {
    DifferenceFft<typename Derived::Scalar> diff(window, tau_max);
    return diff(frame);
}

/// Cumulative mean normalized difference: d'(0) = 1 and
/// d'(tau) = d(tau) / ((1/tau) sum_{j=1..tau} d(j)), with d' = 1 wherever the
/// running sum is zero. Throws DomainError on negative input.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> cmnd(const Eigen::MatrixBase<Derived>& d) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(d.size());
    if (d.size() == 0) return out;
    if ((d.array() < Scalar(0)).any()) throw DomainError("cmnd: difference function is negative");
    out(0) = 1;
    Scalar running = 0;
    for (Eigen::Index tau = 1; tau < d.size(); ++tau) {
        running += d(tau);
        out(tau) = running > 0 ? d(tau) * static_cast<Scalar>(tau) / running : Scalar(1);
    }
    return out;
}

/// Resamples one CMND frame onto the grid by linear interpolation between
/// floor(c(m)) and ceil(c(m)); integral lags read d' directly.
Eigen::VectorXd yingram_frame(const Eigen::Ref<const Eigen::VectorXd>& cmnd_frame,
                              const MidiLagGrid& grid);

/// ceil(len / hop): the frame count shared by every feature.
Eigen::Index frame_count(Eigen::Index length, int hop);

/// Frame t covers samples [t*hop, t*hop + W + tau_max), zero padded past the end.
Eigen::VectorXd cut_frame(const Samples& samples, Eigen::Index t, const YinConfig& cfg);

FeatureMatrix cmnd_matrix(const Waveform& w, const YinConfig& cfg = {});
FeatureMatrix yingram(const Waveform& w, const YinConfig& cfg = {});

/// Per-frame f0 in Hz, 0 for unvoiced frames. The first dip of d' under the
/// threshold is followed to its local minimum and refined by a parabola
/// through its neighbours. Frames that would run past the end of a signal
/// at least one span long are analysed on the final full span instead.
FeatureMatrix yin_f0(const Waveform& w, const YinConfig& cfg = {}, double threshold = 0.1);

/// Fractional grid bin of the fundamental in one yingram row: the
/// highest-frequency dip under `threshold`, refined by a least-squares
/// parabola spanning about three lags. `first_bin` is the grid bin of row(0)
/// for scoped rows. NaN when no bin dips below the threshold.
double principal_dip(const Eigen::Ref<const Eigen::VectorXd>& row, const MidiLagGrid& grid,
                     int first_bin = 0, double threshold = 0.1);

}  // namespace vox::yin
