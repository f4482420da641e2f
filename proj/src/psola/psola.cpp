// SPDX-License-Identifier: Apache-2.0
#include "vox/psola.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vox/error.hpp"
#include "vox/resample.hpp"

namespace vox::psola {

bool PitchMarks::any_voiced() const {
    return std::find(voiced.begin(), voiced.end(), true) != voiced.end();
}

FeatureMatrix track_f0(const Waveform& w) {
    yin::YinConfig cfg;
    cfg.sample_rate = w.sample_rate;
    return yin::yin_f0(w, cfg);
}

double median_voiced_f0(const FeatureMatrix& f0) {
    std::vector<double> voiced;
    for (Eigen::Index i = 0; i < f0.rows(); ++i) {
        if (f0.data(i, 0) > 0.0f) voiced.push_back(f0.data(i, 0));
    }
    if (voiced.empty()) return 0.0;
    const auto mid = voiced.begin() + static_cast<std::ptrdiff_t>(voiced.size() / 2);
    std::nth_element(voiced.begin(), mid, voiced.end());
    if (voiced.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(voiced.begin(), mid);
    return 0.5 * (lower + upper);
}

PitchMarks estimate_pitch_marks(const Waveform& w, const FeatureMatrix& f0, int window) {
    if (f0.rows() == 0) throw DomainError("pitch marks: empty f0 track");
    if (f0.kind != FeatureKind::f0) throw TypeError("pitch marks: expected an f0 track");

    const double sr = w.sample_rate;
    const Eigen::Index n = w.size();
    const auto min_gap = static_cast<Eigen::Index>(std::ceil(sr / kMaxVoicedHz));
    const auto max_gap = static_cast<Eigen::Index>(std::floor(sr / kMinVoicedHz));
    const auto unvoiced_step = std::max<Eigen::Index>(1, std::lround(sr * kUnvoicedSpacingSeconds));

    auto f0_at = [&](Eigen::Index pos) {
        const double frame = std::round((static_cast<double>(pos) - window / 2.0) / f0.hop);
        const auto t = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(frame), 0, f0.rows() - 1);
        const double f = f0.data(t, 0);
        return (f >= kMinVoicedHz && f <= kMaxVoicedHz) ? f : 0.0;
    };
    auto argmax = [&](Eigen::Index lo, Eigen::Index hi) {
        Eigen::Index best = lo;
        for (Eigen::Index i = lo + 1; i <= hi; ++i) {
            if (w.samples(i) > w.samples(best)) best = i;
        }
        return best;
    };

    PitchMarks marks;
    Eigen::Index next = 0;
    double last_period = 0.0;
    while (next < n) {
        const double f = f0_at(next);
        const bool after_voiced = !marks.voiced.empty() && marks.voiced.back();
        if (f == 0.0) {
            if (after_voiced) next = std::max(next, marks.positions.back() + std::lround(last_period));
            if (next >= n) break;
            marks.positions.push_back(next);
            marks.voiced.push_back(false);
            next += unvoiced_step;
            continue;
        }
        const double period = sr / f;
        Eigen::Index lo = next, hi = 0;
        if (after_voiced) {
            const Eigen::Index prev = marks.positions.back();
            lo = prev + std::max(min_gap, static_cast<Eigen::Index>(std::floor(0.8 * period)));
            hi = prev + std::min(max_gap, static_cast<Eigen::Index>(std::ceil(1.2 * period)));
        } else {
            hi = lo + static_cast<Eigen::Index>(std::ceil(period)) - 1;
        }
        if (lo >= n) break;
        hi = std::min(hi, n - 1);
        const Eigen::Index mark = argmax(lo, hi);
        marks.positions.push_back(mark);
        marks.voiced.push_back(true);
        last_period = period;
        next = mark + 1;
    }
    return marks;
}

namespace {

// Local period of each mark from the gaps to neighbours of the same voicing.
std::vector<double> mark_periods(const PitchMarks& marks, double sr) {
    const double fallback = sr * kUnvoicedSpacingSeconds;
    std::vector<double> periods(marks.size(), fallback);
    for (std::size_t i = 0; i < marks.size(); ++i) {
        double sum = 0.0;
        int count = 0;
        if (i > 0 && marks.voiced[i - 1] == marks.voiced[i]) {
            sum += static_cast<double>(marks.positions[i] - marks.positions[i - 1]);
            ++count;
        }
        if (i + 1 < marks.size() && marks.voiced[i + 1] == marks.voiced[i]) {
            sum += static_cast<double>(marks.positions[i + 1] - marks.positions[i]);
            ++count;
        }
        if (count > 0) periods[i] = sum / count;
    }
    return periods;
}

std::size_t nearest_mark(const std::vector<Eigen::Index>& positions, double t) {
    const auto it = std::lower_bound(positions.begin(), positions.end(), t,
                                     [](Eigen::Index p, double v) { return static_cast<double>(p) < v; });
    if (it == positions.begin()) return 0;
    if (it == positions.end()) return positions.size() - 1;
    const auto i = static_cast<std::size_t>(it - positions.begin());
    return (static_cast<double>(*it) - t) < (t - static_cast<double>(positions[i - 1])) ? i : i - 1;
}

void fit_length(Eigen::VectorXd& y, Eigen::Index length) {
    const Eigen::Index old = y.size();
    y.conservativeResize(length);
    if (length > old) y.tail(length - old).setZero();
}

Waveform finish(const Eigen::VectorXd& y, int sample_rate, Diagnostics* diag) {
    Waveform out(y.cast<float>(), sample_rate);
    clip_output(out.samples, diag);
    return out;
}

}  // namespace

Eigen::VectorXd synthesize(const Eigen::Ref<const Eigen::VectorXd>& x, const PitchMarks& marks,
                           double sample_rate, double time_ratio, const PitchMap& pitch,
                           Eigen::Index out_length) {
    if (!(time_ratio > 0.0)) throw DomainError("psola: time ratio must be positive");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(out_length);
    if (marks.size() == 0 || x.size() == 0) return y;

    const std::vector<double> periods = mark_periods(marks, sample_rate);
    std::vector<double> factors(marks.size(), 1.0);
    for (std::size_t i = 0; i < marks.size(); ++i) {
        if (marks.voiced[i]) factors[i] = pitch(sample_rate / periods[i]);
        if (!(factors[i] > 0.0) || !std::isfinite(factors[i])) throw DomainError("psola: pitch factor must be positive");
    }

    const Eigen::Index n_in = x.size();
    double s = time_ratio * static_cast<double>(marks.positions.front());
    double half = 0.0;
    while (s - half < static_cast<double>(out_length)) {
        const std::size_t i = nearest_mark(marks.positions, s / time_ratio);
        const double analysis = periods[i];
        const double synthesis = analysis / factors[i];
        // Grains span two periods of whichever spacing is tighter, so raised
        // pitch never stacks more than two grains.
        half = marks.voiced[i] ? std::min(analysis, synthesis) : analysis;

        const auto centre = static_cast<Eigen::Index>(std::lround(s));
        const auto reach = static_cast<Eigen::Index>(std::ceil(half)) - 1;
        const Eigen::Index src = marks.positions[i];
        for (Eigen::Index k = -reach; k <= reach; ++k) {
            const Eigen::Index in = src + k, out = centre + k;
            if (in < 0 || in >= n_in || out < 0 || out >= out_length) continue;
            const double gain = 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(k) / half));
            y(out) += gain * x(in);
        }
        s += synthesis;
    }
    return y;
}

Waveform psola_pitch_shift(const Waveform& w, double ratio, bool preserve_formants, Diagnostics* diag) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw DomainError("pitch shift: ratio must be positive");
    const double nominal = std::exp2(6.0 / 12.0);
    if (diag && (ratio > nominal * (1 + 1e-9) || ratio < (1 - 1e-9) / nominal)) {
        diag->warn("pitch shift ratio " + std::to_string(ratio) + " is outside the nominal +-6 semitone range");
    }
    const FeatureMatrix f0 = track_f0(w);
    const PitchMarks marks = estimate_pitch_marks(w, f0);
    if (!marks.any_voiced()) {
        if (diag) diag->warn("pitch shift: no voiced frames, input passed through");
        return w;
    }
    const Eigen::VectorXd x = w.samples.cast<double>();
    const double sr = w.sample_rate;
    if (preserve_formants) {
        return finish(synthesize(x, marks, sr, 1.0, [ratio](double) { return ratio; }, x.size()), w.sample_rate, diag);
    }
    // Stretch by the ratio, then play back faster by the same ratio.
    const auto stretched_len = static_cast<Eigen::Index>(std::llround(static_cast<double>(x.size()) * ratio));
    const Eigen::VectorXd stretched = synthesize(x, marks, sr, ratio, [](double) { return 1.0; }, stretched_len);
    Eigen::VectorXd y = resample_by(stretched, 1.0 / ratio);
    fit_length(y, x.size());
    return finish(y, w.sample_rate, diag);
}

Waveform psola_time_stretch(const Waveform& w, double ratio, Diagnostics* diag) {
    if (!(ratio >= 0.25 && ratio <= 4.0)) throw DomainError("time stretch: ratio must lie in [0.25, 4]");
    const FeatureMatrix f0 = track_f0(w);
    const PitchMarks marks = estimate_pitch_marks(w, f0);
    const Eigen::VectorXd x = w.samples.cast<double>();
    const auto out_len = static_cast<Eigen::Index>(std::llround(static_cast<double>(x.size()) * ratio));
    return finish(synthesize(x, marks, w.sample_rate, ratio, [](double) { return 1.0; }, out_len),
                  w.sample_rate, diag);
}

}  // namespace vox::psola
