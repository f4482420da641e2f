// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace vox {

/// Seeded generator threaded explicitly through every randomized call.
/// Uniform draws take the top 53 bits of mt19937_64, so sequences are
/// identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool coin() { return (next() >> 63) != 0; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace vox
