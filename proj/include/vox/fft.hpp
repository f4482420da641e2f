// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

namespace vox {

/// Real-input FFT of a fixed length returning the n/2+1 half spectrum.
template <typename Scalar>
class RealFft {
public:
    using Real = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Complex = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

    explicit RealFft(Eigen::Index n) : n_(n) { fft_.SetFlag(Eigen::FFT<Scalar>::HalfSpectrum); }

    [[nodiscard]] Eigen::Index size() const { return n_; }

    /// Zero-pads (or truncates) the input to the transform length.
    template <typename Derived>
    Complex forward(const Eigen::MatrixBase<Derived>& input) {
        Real padded = Real::Zero(n_);
        const Eigen::Index m = std::min<Eigen::Index>(n_, input.size());
        padded.head(m) = input.head(m).template cast<Scalar>();
        Complex out(n_ / 2 + 1);
        fft_.fwd(out, padded);
        return out;
    }

    /// Inverse of a half spectrum, scaled by 1/n.
    Real inverse(const Complex& half) {
        Real out(n_);
        fft_.inv(out, half, n_);
        return out;
    }

private:
    Eigen::Index n_;
    Eigen::FFT<Scalar> fft_;
};

inline Eigen::Index next_pow2(Eigen::Index n) {
    Eigen::Index p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace vox
