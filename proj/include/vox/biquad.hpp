// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <numbers>
#include <string_view>

#include <Eigen/Core>

namespace vox::perturb {

enum class FilterKind { low_shelf, high_shelf, peaking };

std::string_view to_string(FilterKind kind);
FilterKind filter_kind_from_string(std::string_view name);

/// H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
struct BiquadCoeffs {
    double b0 = 1.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;

    template <typename Scalar = double>
    [[nodiscard]] std::complex<Scalar> response(Scalar omega) const {
        const std::complex<Scalar> z1 = std::polar(Scalar(1), -omega);
        const std::complex<Scalar> z2 = z1 * z1;
        return (Scalar(b0) + Scalar(b1) * z1 + Scalar(b2) * z2) /
               (Scalar(1) + Scalar(a1) * z1 + Scalar(a2) * z2);
    }

    [[nodiscard]] double magnitude_db(double hz, double sample_rate) const {
        return 20.0 * std::log10(std::abs(response(2.0 * std::numbers::pi * hz / sample_rate)));
    }

    /// Largest pole magnitude.
    [[nodiscard]] double pole_radius() const;
    [[nodiscard]] bool stable() const { return pole_radius() < 1.0; }
};

/// Audio EQ cookbook shelving and peaking sections. gain_db == 0 yields the
/// identity section. Throws DomainError unless 0 < fc < sr/2 and q > 0.
BiquadCoeffs design_biquad(FilterKind kind, double fc, double q, double gain_db, double sample_rate);

/// Transposed direct form II, zero initial state.
class Biquad {
public:
    explicit Biquad(const BiquadCoeffs& c) : c_(c) {}

    double operator()(double x) {
        const double y = c_.b0 * x + s1_;
        s1_ = c_.b1 * x - c_.a1 * y + s2_;
        s2_ = c_.b2 * x - c_.a2 * y;
        return y;
    }

    void process(Eigen::Ref<Eigen::VectorXd> x) {
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = (*this)(x(i));
    }

private:
    BiquadCoeffs c_;
    double s1_ = 0.0;
    double s2_ = 0.0;
};

}  // namespace vox::perturb
