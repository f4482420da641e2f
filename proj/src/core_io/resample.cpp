// SPDX-License-Identifier: Apache-2.0
#include "vox/resample.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "vox/error.hpp"

namespace vox {

namespace {

constexpr int kHalfTaps = 16;          // 32 taps per phase
constexpr int kTableResolution = 512;  // kernel samples per zero crossing
constexpr double kKaiserBeta = 8.6;
// Puts the stopband edge of the 32-tap Kaiser kernel at the new Nyquist.
constexpr double kRolloff = 0.83;

// sinc(v) * kaiser(v / kHalfTaps) for v in [0, kHalfTaps].
const std::vector<double>& kernel_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kHalfTaps * kTableResolution + 2, 0.0);
        const double norm = std::cyl_bessel_i(0.0, kKaiserBeta);
        for (int i = 0; i <= kHalfTaps * kTableResolution; ++i) {
            const double v = static_cast<double>(i) / kTableResolution;
            const double r = v / kHalfTaps;
            const double window = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
            const double sinc = i == 0 ? 1.0 : std::sin(std::numbers::pi * v) / (std::numbers::pi * v);
            t[static_cast<std::size_t>(i)] = sinc * window;
        }
        return t;
    }();
    return table;
}

double kernel(double v) {
    v = std::abs(v);
    if (v >= kHalfTaps) return 0.0;
    const auto& t = kernel_table();
    const double pos = v * kTableResolution;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return t[i] + frac * (t[i + 1] - t[i]);
}

}  // namespace

Eigen::VectorXd resample_by(const Eigen::Ref<const Eigen::VectorXd>& x, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw DomainError("resample: factor must be positive");
    const auto out_len = static_cast<Eigen::Index>(std::llround(static_cast<double>(x.size()) * factor));
    Eigen::VectorXd y = Eigen::VectorXd::Zero(out_len);
    const double cutoff = std::min(1.0, factor) * kRolloff;
    const double reach = kHalfTaps / cutoff;
    const Eigen::Index n_in = x.size();
    for (Eigen::Index n = 0; n < out_len; ++n) {
        const double t = static_cast<double>(n) / factor;
        const auto first = static_cast<Eigen::Index>(std::ceil(t - reach));
        const auto last = static_cast<Eigen::Index>(std::floor(t + reach));
        // Dividing by the full-support kernel sum keeps unit DC gain at every
        // phase; samples outside the signal count as zeros.
        double acc = 0.0, norm = 0.0;
        for (Eigen::Index k = first; k <= last; ++k) {
            const double g = kernel((t - static_cast<double>(k)) * cutoff);
            norm += g;
            if (k >= 0 && k < n_in) acc += g * x(k);
        }
        y(n) = norm != 0.0 ? acc / norm : acc;
    }
    return y;
}

Waveform resample(const Waveform& w, int target_rate) {
    if (target_rate < 1) throw DomainError("resample: target rate must be positive");
    if (w.sample_rate < 1) throw DomainError("resample: source rate must be positive");
    if (target_rate == w.sample_rate) return w;
    const double factor = static_cast<double>(target_rate) / w.sample_rate;
    const Eigen::VectorXd y = resample_by(w.samples.cast<double>(), factor);
    return Waveform(y.cast<float>(), target_rate);
}

}  // namespace vox
