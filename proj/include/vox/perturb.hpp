// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "vox/biquad.hpp"
#include "vox/rng.hpp"
#include "vox/types.hpp"

namespace vox::perturb {

inline constexpr double kLowShelfHz = 60.0;
inline constexpr double kHighShelfHz = 10000.0;
inline constexpr int kPeakCount = 8;
inline constexpr double kQMin = 2.0;
inline constexpr double kQMax = 5.0;
inline constexpr double kMaxGainDb = 12.0;

inline constexpr double kMaxFormantRatio = 1.4;
inline constexpr double kMaxPitchShiftRatio = 2.0;
inline constexpr double kMaxPitchRangeRatio = 1.5;

struct FilterBand {
    FilterKind kind = FilterKind::peaking;
    double fc = 1000.0;
    double q = kQMin;
    double gain_db = 0.0;

    friend bool operator==(const FilterBand&, const FilterBand&) = default;
};

/// One low shelf at 60 Hz, eight log-spaced peaks, one high shelf at 10 kHz.
struct PeqConfig {
    FilterBand low_shelf{FilterKind::low_shelf, kLowShelfHz, kQMin, 0.0};
    std::array<FilterBand, kPeakCount> peaks{};
    FilterBand high_shelf{FilterKind::high_shelf, kHighShelfHz, kQMin, 0.0};

    /// All gains zero, Q = kQMin, centres at the standard positions.
    static PeqConfig flat();

    /// Low shelf, peaks in ascending frequency, high shelf.
    [[nodiscard]] std::array<FilterBand, kPeakCount + 2> bands() const;

    /// Throws DomainError on fixed-cutoff, Q or gain range violations.
    void validate() const;

    friend bool operator==(const PeqConfig&, const PeqConfig&) = default;
};

/// Interior points of a 10-point log-spaced partition of [60, 10000] Hz.
std::array<double, kPeakCount> peak_centers();

/// Q = 2 * (5/2)^z for z in [0, 1].
inline double q_from_unit(double z) { return kQMin * std::pow(kQMax / kQMin, z); }

enum class Chain { f, g };
std::string_view to_string(Chain chain);
Chain chain_from_string(std::string_view name);

struct PerturbParams {
    double fs_ratio = 1.0;
    double pr_shift_ratio = 1.0;
    double pr_range_ratio = 1.0;
    PeqConfig peq = PeqConfig::flat();
    std::uint64_t seed = 0;
    Chain chain = Chain::f;

    friend bool operator==(const PerturbParams&, const PerturbParams&) = default;
};

/// Draws Q then gain for each band in bands() order.
PeqConfig sample_peq(Rng& rng);

/// Draw order: fs (ratio, coin), then for chain f the pitch shift and range
/// (ratio, coin each), then the PEQ. Chain g leaves both pitch ratios at 1.
PerturbParams sample_perturb_params(Rng& rng, Chain chain);

Waveform peq_apply(const Waveform& w, const PeqConfig& cfg, Diagnostics* diag = nullptr);

/// Scales the spectral envelope by `ratio` while keeping f0 and duration.
/// ratio must lie in [0.5, 2].
Waveform formant_shift(const Waveform& w, double ratio, Diagnostics* diag = nullptr);

/// Maps the f0 contour to med * shift * (f0 / med)^range about the median
/// voiced f0, keeping formants and duration.
Waveform pitch_randomize(const Waveform& w, double shift_ratio, double range_ratio,
                         Diagnostics* diag = nullptr);

/// Applies the chain described by `params` (peq, then pr for chain f, then fs).
Waveform apply_chain(const Waveform& w, const PerturbParams& params, Diagnostics* diag = nullptr);

/// f(x) = fs(pr(peq(x)))
std::pair<Waveform, PerturbParams> perturb_f(const Waveform& w, Rng& rng, Diagnostics* diag = nullptr);
/// g(x) = fs(peq(x))
std::pair<Waveform, PerturbParams> perturb_g(const Waveform& w, Rng& rng, Diagnostics* diag = nullptr);

/// JSON manifest: {seed, chain, fs_ratio, pr_shift_ratio, pr_range_ratio,
/// peq: [10 x {kind, fc, q, gain_db}]}.
std::string manifest_json(const PerturbParams& params);
PerturbParams parse_manifest(std::string_view json);

}  // namespace vox::perturb
