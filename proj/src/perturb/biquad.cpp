// SPDX-License-Identifier: Apache-2.0
#include "vox/biquad.hpp"

#include <cmath>
#include <string>

#include "vox/error.hpp"

namespace vox::perturb {

std::string_view to_string(FilterKind kind) {
    switch (kind) {
        case FilterKind::low_shelf: return "low_shelf";
        case FilterKind::high_shelf: return "high_shelf";
        case FilterKind::peaking: return "peaking";
    }
    return "unknown";
}

FilterKind filter_kind_from_string(std::string_view name) {
    if (name == "low_shelf") return FilterKind::low_shelf;
    if (name == "high_shelf") return FilterKind::high_shelf;
    if (name == "peaking") return FilterKind::peaking;
    throw FormatError("unknown filter kind '" + std::string(name) + "'");
}

double BiquadCoeffs::pole_radius() const {
    const double disc = a1 * a1 - 4.0 * a2;
    if (disc < 0.0) return std::sqrt(a2);
    const double s = std::sqrt(disc);
    return std::max(std::abs((-a1 + s) / 2.0), std::abs((-a1 - s) / 2.0));
}

BiquadCoeffs design_biquad(FilterKind kind, double fc, double q, double gain_db, double sample_rate) {
    if (!(sample_rate > 0.0)) throw DomainError("biquad: sample rate must be positive");
    if (!(fc > 0.0 && fc < sample_rate / 2.0)) {
        throw DomainError("biquad: fc " + std::to_string(fc) + " Hz outside (0, " +
                          std::to_string(sample_rate / 2.0) + ")");
    }
    if (!(q > 0.0)) throw DomainError("biquad: Q must be positive");
    if (!std::isfinite(gain_db)) throw DomainError("biquad: gain must be finite");
    if (gain_db == 0.0) return {};

    const double A = std::pow(10.0, gain_db / 40.0);
    const double w0 = 2.0 * std::numbers::pi * fc / sample_rate;
    const double cw = std::cos(w0);
    const double alpha = std::sin(w0) / (2.0 * q);
    const double root = 2.0 * std::sqrt(A) * alpha;

    double b0 = 0, b1 = 0, b2 = 0, a0 = 0, a1 = 0, a2 = 0;
    switch (kind) {
        case FilterKind::peaking:
            b0 = 1.0 + alpha * A;
            b1 = -2.0 * cw;
            b2 = 1.0 - alpha * A;
            a0 = 1.0 + alpha / A;
            a1 = -2.0 * cw;
            a2 = 1.0 - alpha / A;
            break;
        case FilterKind::low_shelf:
            b0 = A * ((A + 1) - (A - 1) * cw + root);
            b1 = 2 * A * ((A - 1) - (A + 1) * cw);
            b2 = A * ((A + 1) - (A - 1) * cw - root);
            a0 = (A + 1) + (A - 1) * cw + root;
            a1 = -2 * ((A - 1) + (A + 1) * cw);
            a2 = (A + 1) + (A - 1) * cw - root;
            break;
        case FilterKind::high_shelf:
            b0 = A * ((A + 1) + (A - 1) * cw + root);
            b1 = -2 * A * ((A - 1) + (A + 1) * cw);
            b2 = A * ((A + 1) + (A - 1) * cw - root);
            a0 = (A + 1) - (A - 1) * cw + root;
            a1 = 2 * ((A - 1) - (A + 1) * cw);
            a2 = (A + 1) - (A - 1) * cw - root;
            break;
    }
    return {b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0};
}

}  // namespace vox::perturb
