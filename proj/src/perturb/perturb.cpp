// SPDX-License-Identifier: Apache-2.0
#include "vox/perturb.hpp"

#include <cmath>
#include <string>

#include "vox/error.hpp"
#include "vox/psola.hpp"
#include "vox/resample.hpp"

namespace vox::perturb {

std::string_view to_string(Chain chain) { return chain == Chain::f ? "f" : "g"; }

Chain chain_from_string(std::string_view name) {
    if (name == "f") return Chain::f;
    if (name == "g") return Chain::g;
    throw FormatError("unknown perturbation chain '" + std::string(name) + "'");
}

std::array<double, kPeakCount> peak_centers() {
    std::array<double, kPeakCount> centres{};
    const double span = kHighShelfHz / kLowShelfHz;
    for (int i = 0; i < kPeakCount; ++i) {
        centres[static_cast<std::size_t>(i)] = kLowShelfHz * std::pow(span, (i + 1.0) / (kPeakCount + 1.0));
    }
    return centres;
}

PeqConfig PeqConfig::flat() {
    PeqConfig cfg;
    const auto centres = peak_centers();
    for (std::size_t i = 0; i < cfg.peaks.size(); ++i) cfg.peaks[i] = {FilterKind::peaking, centres[i], kQMin, 0.0};
    return cfg;
}

std::array<FilterBand, kPeakCount + 2> PeqConfig::bands() const {
    std::array<FilterBand, kPeakCount + 2> out{};
    out.front() = low_shelf;
    std::copy(peaks.begin(), peaks.end(), out.begin() + 1);
    out.back() = high_shelf;
    return out;
}

void PeqConfig::validate() const {
    if (low_shelf.kind != FilterKind::low_shelf || low_shelf.fc != kLowShelfHz) {
        throw DomainError("peq: low shelf must be a low_shelf at 60 Hz");
    }
    if (high_shelf.kind != FilterKind::high_shelf || high_shelf.fc != kHighShelfHz) {
        throw DomainError("peq: high shelf must be a high_shelf at 10 kHz");
    }
    double previous = kLowShelfHz;
    for (const auto& p : peaks) {
        if (p.kind != FilterKind::peaking || !(p.fc > previous && p.fc < kHighShelfHz)) {
            throw DomainError("peq: peak centres must ascend strictly inside (60, 10000) Hz");
        }
        previous = p.fc;
    }
    for (const auto& b : bands()) {
        if (!(b.q >= kQMin && b.q <= kQMax)) throw DomainError("peq: Q outside [2, 5]");
        if (!(b.gain_db >= -kMaxGainDb && b.gain_db <= kMaxGainDb)) throw DomainError("peq: gain outside [-12, 12] dB");
    }
}

PeqConfig sample_peq(Rng& rng) {
    PeqConfig cfg = PeqConfig::flat();
    auto draw = [&rng](FilterBand& band) {
        band.q = q_from_unit(rng.uniform());
        band.gain_db = rng.uniform(-kMaxGainDb, kMaxGainDb);
    };
    draw(cfg.low_shelf);
    for (auto& p : cfg.peaks) draw(p);
    draw(cfg.high_shelf);
    return cfg;
}

namespace {

double ratio_or_reciprocal(Rng& rng, double max_ratio) {
    const double r = rng.uniform(1.0, max_ratio);
    return rng.coin() ? 1.0 / r : r;
}

Waveform peq_unclipped(const Waveform& w, const PeqConfig& cfg) {
    cfg.validate();
    Eigen::VectorXd x = w.samples.cast<double>();
    for (const auto& band : cfg.bands()) {
        Biquad(design_biquad(band.kind, band.fc, band.q, band.gain_db, w.sample_rate)).process(x);
    }
    return Waveform(x.cast<float>(), w.sample_rate);
}

Waveform formant_unclipped(const Waveform& w, double ratio, Diagnostics* diag) {
    if (!(ratio >= 0.5 && ratio <= 2.0)) throw DomainError("formant shift: ratio must lie in [0.5, 2]");
    if (ratio == 1.0 || w.size() == 0) return w;

    // Reading the input `ratio` times faster scales every frequency by the
    // ratio; PSOLA then restores f0 and duration, leaving the envelope moved.
    const Eigen::VectorXd x = w.samples.cast<double>();
    const Eigen::VectorXd fast = resample_by(x, 1.0 / ratio);
    const Waveform scaled(fast.cast<float>(), w.sample_rate);
    const psola::PitchMarks marks = psola::estimate_pitch_marks(scaled, psola::track_f0(scaled));
    if (!marks.any_voiced()) {
        if (diag) diag->warn("formant shift: no voiced frames, input passed through");
        return w;
    }
    const double time_ratio = static_cast<double>(x.size()) / static_cast<double>(fast.size());
    const Eigen::VectorXd y = psola::synthesize(fast, marks, w.sample_rate, time_ratio,
                                                [ratio](double) { return 1.0 / ratio; }, x.size());
    return Waveform(y.cast<float>(), w.sample_rate);
}

void check_pitch_ratios(double shift_ratio, double range_ratio) {
    const double eps = 1e-12;
    if (!(shift_ratio >= 1.0 / kMaxPitchShiftRatio - eps && shift_ratio <= kMaxPitchShiftRatio + eps)) {
        throw DomainError("pitch randomize: shift ratio must lie in [1/2, 2]");
    }
    if (!(range_ratio >= 1.0 / kMaxPitchRangeRatio - eps && range_ratio <= kMaxPitchRangeRatio + eps)) {
        throw DomainError("pitch randomize: range ratio must lie in [1/1.5, 1.5]");
    }
}

Waveform pitch_unclipped(const Waveform& w, double shift_ratio, double range_ratio, Diagnostics* diag) {
    check_pitch_ratios(shift_ratio, range_ratio);
    if (w.size() == 0) return w;
    const FeatureMatrix f0 = psola::track_f0(w);
    const double median = psola::median_voiced_f0(f0);
    const psola::PitchMarks marks = psola::estimate_pitch_marks(w, f0);
    if (median <= 0.0 || !marks.any_voiced()) {
        if (diag) diag->warn("pitch randomize: no voiced frames, input passed through");
        return w;
    }
    auto contour = [=](double f) { return shift_ratio * std::pow(f / median, range_ratio - 1.0); };
    const Eigen::VectorXd y =
        psola::synthesize(w.samples.cast<double>(), marks, w.sample_rate, 1.0, contour, w.size());
    return Waveform(y.cast<float>(), w.sample_rate);
}

Waveform clipped(Waveform w, Diagnostics* diag) {
    clip_output(w.samples, diag);
    return w;
}

}  // namespace

PerturbParams sample_perturb_params(Rng& rng, Chain chain) {
    PerturbParams p;
    p.seed = rng.seed();
    p.chain = chain;
    p.fs_ratio = ratio_or_reciprocal(rng, kMaxFormantRatio);
    if (chain == Chain::f) {
        p.pr_shift_ratio = ratio_or_reciprocal(rng, kMaxPitchShiftRatio);
        p.pr_range_ratio = ratio_or_reciprocal(rng, kMaxPitchRangeRatio);
    }
    p.peq = sample_peq(rng);
    return p;
}

Waveform peq_apply(const Waveform& w, const PeqConfig& cfg, Diagnostics* diag) {
    return clipped(peq_unclipped(w, cfg), diag);
}

Waveform formant_shift(const Waveform& w, double ratio, Diagnostics* diag) {
    return clipped(formant_unclipped(w, ratio, diag), diag);
}

Waveform pitch_randomize(const Waveform& w, double shift_ratio, double range_ratio, Diagnostics* diag) {
    return clipped(pitch_unclipped(w, shift_ratio, range_ratio, diag), diag);
}

Waveform apply_chain(const Waveform& w, const PerturbParams& params, Diagnostics* diag) {
    Waveform x = peq_unclipped(w, params.peq);
    if (params.chain == Chain::f) x = pitch_unclipped(x, params.pr_shift_ratio, params.pr_range_ratio, diag);
    x = formant_unclipped(x, params.fs_ratio, diag);
    return clipped(std::move(x), diag);
}

std::pair<Waveform, PerturbParams> perturb_f(const Waveform& w, Rng& rng, Diagnostics* diag) {
    PerturbParams params = sample_perturb_params(rng, Chain::f);
    return {apply_chain(w, params, diag), params};
}

std::pair<Waveform, PerturbParams> perturb_g(const Waveform& w, Rng& rng, Diagnostics* diag) {
    PerturbParams params = sample_perturb_params(rng, Chain::g);
    return {apply_chain(w, params, diag), params};
}

}  // namespace vox::perturb
