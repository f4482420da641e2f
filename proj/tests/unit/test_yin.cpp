// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "support/oracles.hpp"
#include "support/signals.hpp"
#include "vox/error.hpp"
#include "vox/yin.hpp"

using namespace vox;
using namespace vox::yin;

namespace {

Eigen::VectorXd random_frame(std::mt19937& gen, Eigen::Index n) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXd x(n);
    for (auto& v : x) v = nd(gen);
    return x;
}

Eigen::VectorXd sine_frame(double period, Eigen::Index n, double phase = 0.4) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = std::sin(2.0 * std::numbers::pi * i / period + phase);
    return x;
}

double max_relative_deviation(const Eigen::VectorXd& a, const Eigen::VectorXd& ref) {
    double worst = 0.0;
    const double scale = ref.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double denom = std::max(std::abs(ref(i)), 1e-12 * scale);
        if (denom > 0) worst = std::max(worst, std::abs(a(i) - ref(i)) / denom);
    }
    return worst;
}

// Principal-dip bin of every frame with a dip.
std::vector<double> dip_track(const FeatureMatrix& y, const MidiLagGrid& grid) {
    std::vector<double> bins;
    for (Eigen::Index t = 0; t < y.rows(); ++t) {
        const double b = principal_dip(y.data.row(t).transpose().cast<double>(), grid);
        if (!std::isnan(b)) bins.push_back(b);
    }
    return bins;
}

// Frames whose analysis span lies entirely inside the signal.
std::vector<double> interior(const std::vector<double>& v, Eigen::Index n_frames) {
    const auto keep = static_cast<std::size_t>(std::max<Eigen::Index>(0, n_frames - 16));
    return {v.begin(), v.begin() + std::min(keep, v.size())};
}

}  // namespace

TEST_CASE("default grid matches a direct scan of the lag bounds") {
    const YinConfig cfg;
    const MidiLagGrid grid = build_grid(cfg);
    // Oracle: every k * 0.05 midi whose lag lies in [22, 2047].
    std::vector<int> admitted;
    for (int k = 0; k < 4000; ++k) {
        const double c = 22050.0 / (440.0 * std::pow(2.0, (k / 20.0 - 69.0) / 12.0));
        if (c >= 22.0 && c <= 2047.0) admitted.push_back(k);
    }
    REQUIRE(!admitted.empty());
    CHECK(grid.first_index == admitted.front());
    CHECK(grid.size == static_cast<int>(admitted.size()));
    CHECK(grid.first_index == 96);    // midi 4.80
    CHECK(grid.size == 1570);         // through midi 83.25
    CHECK(grid.midi(0) == doctest::Approx(4.80));
    CHECK(grid.midi(grid.size - 1) == doctest::Approx(83.25));
    CHECK(grid.frequency(0) == doctest::Approx(10.788).epsilon(1e-4));
    CHECK(grid.frequency(grid.size - 1) == doctest::Approx(1002.13).epsilon(1e-5));
    for (int b = 0; b < grid.size; ++b) {
        CHECK(grid.lag(b) >= cfg.tau_min);
        CHECK(grid.lag(b) <= cfg.tau_max);
    }
    CHECK(grid.midi(20) - grid.midi(0) == doctest::Approx(1.0));
}

TEST_CASE("midi-to-lag conversion") {
    CHECK(midi_to_lag(69.0, 22050) == doctest::Approx(50.1136).epsilon(1e-6));
    CHECK(midi_to_lag(81.0, 22050) == doctest::Approx(25.0568).epsilon(1e-6));
}

TEST_CASE("bad configs are rejected") {
    YinConfig cfg;
    cfg.tau_min = 0;
    CHECK_THROWS_AS(build_grid(cfg), ConfigError);
    cfg = {};
    cfg.tau_max = cfg.window;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.hop = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.tau_min = 2000;
    cfg.tau_max = 2001;  // under a 0.05 midi step: no grid point between
    CHECK_THROWS_AS(build_grid(cfg), ConfigError);
}

TEST_CASE("default scope covers 25.11..430.19 Hz in 984 bins") {
    const MidiLagGrid grid = build_grid({});
    const Scope s = default_scope(grid);
    int count = 0;
    for (int b = 0; b < grid.size; ++b) count += grid.frequency(b) >= 25.11 && grid.frequency(b) <= 430.19;
    CHECK(count == 984);
    CHECK(s.width() == 984);
    CHECK(s.lo_bin == 293);
    CHECK(grid.midi(s.lo_bin) == doctest::Approx(19.45));
    CHECK(grid.midi(s.hi_bin) == doctest::Approx(68.60));
}

TEST_CASE("difference_direct examples") {
    const Eigen::VectorXd constant = Eigen::VectorXd::Constant(300, 0.7);
    CHECK(difference_direct(constant, 200, 99).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::VectorXd s = sine_frame(50.0, 2048 + 100);
    const Eigen::VectorXd d = difference_direct(s, 2048, 100);
    CHECK(d(50) < 1e-8 * d(25));

    CHECK_THROWS_AS(difference_direct(constant, 250, 51), BoundsError);
}

TEST_CASE("difference_fft examples") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4095);
    CHECK(difference_fft(zero, 2048, 2047).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::VectorXd tone = sine_frame(22050.0 / 440.0, 4095);
    const Eigen::VectorXd d = difference_fft(tone, 2048, 2047);
    const Eigen::VectorXd ref = difference_direct(tone, 2048, 2047);
    Eigen::Index first_period = 0;
    d.segment(22, 75 - 22 + 1).minCoeff(&first_period);
    CHECK(std::abs(22 + first_period - 50) <= 1);
    // Over the whole range the deepest dip sits on a near-integer multiple of
    // the 50.11-sample period rather than the first one; both routes agree.
    Eigen::Index global = 0, global_ref = 0;
    d.segment(22, 2026).minCoeff(&global);
    ref.segment(22, 2026).minCoeff(&global_ref);
    CHECK(global == global_ref);
    CHECK(22 + global == 1754);  // 35 periods = 1753.98

    std::mt19937 gen(11);
    const Eigen::VectorXd white = random_frame(gen, 4095);
    CHECK(difference_fft(white, 2048, 2047).minCoeff() >= 0.0);
    CHECK_THROWS_AS(difference_fft(white.head(100), 2048, 2047), BoundsError);
}

TEST_CASE("direct and FFT difference functions agree on 1000 random frames") {
    std::mt19937 gen(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        // Every 50th frame uses the full default geometry, the rest random sizes.
        const bool full = trial % 50 == 0;
        const int window = full ? 2048 : 16 + static_cast<int>(gen() % 500);
        const int tau_max = full ? 2047 : 1 + static_cast<int>(gen() % (window - 1));
        const Eigen::VectorXd x = random_frame(gen, window + tau_max);
        const Eigen::VectorXd direct = difference_direct(x, window, tau_max);
        const Eigen::VectorXd fast = difference_fft(x, window, tau_max);
        CHECK(direct.minCoeff() >= 0.0);
        CHECK(fast.minCoeff() >= 0.0);
        CHECK(cmnd(fast)(0) == 1.0);
        worst = std::max(worst, max_relative_deviation(fast.tail(tau_max), direct.tail(tau_max)));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("cmnd normalization") {
    Eigen::VectorXd d(6);
    d << 0, 3, 1, 4, 1, 5;
    const Eigen::VectorXd c = cmnd(d);
    CHECK(c(0) == 1.0);
    CHECK(c(1) == doctest::Approx(1.0));
    CHECK(c(2) == doctest::Approx(1.0 * 2 / 4.0));
    CHECK(c(3) == doctest::Approx(4.0 * 3 / 8.0));
    CHECK(c(5) == doctest::Approx(5.0 * 5 / 14.0));

    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(50, 2.5);
    const Eigen::VectorXd cf = cmnd(flat);
    CHECK((cf.array() - 1.0).abs().maxCoeff() < 1e-12);

    CHECK((cmnd(Eigen::VectorXd::Zero(20)).array() == 1.0).all());

    d(3) = -1;
    CHECK_THROWS_AS(cmnd(d), DomainError);
}

TEST_CASE("yingram_frame interpolation") {
    Eigen::VectorXd dn = Eigen::VectorXd::Constant(60, 0.9);
    dn(49) = 0.1;
    dn(50) = 0.2;
    dn(51) = 0.4;

    // One-bin grids at midi 69 (440 Hz) with rates chosen to hit the lag.
    const MidiLagGrid on_lag{1380, 1, 50.0 * 440.0};
    CHECK(on_lag.lag(0) == 50.0);
    dn(50) = 0.3;
    CHECK(yingram_frame(dn, on_lag)(0) == doctest::Approx(0.3));
    dn(50) = 0.2;

    const MidiLagGrid mid{1380, 1, 50.5 * 440.0};
    CHECK(yingram_frame(dn, mid)(0) == doctest::Approx(0.3));

    const MidiLagGrid beyond{1380, 1, 80.0 * 440.0};
    CHECK_THROWS_AS(yingram_frame(dn, beyond), BoundsError);
}

TEST_CASE("yingram of a 440 Hz frame dips at midi 69") {
    const YinConfig cfg;
    const MidiLagGrid grid = build_grid(cfg);
    const Eigen::VectorXd x = sine_frame(22050.0 / 440.0, cfg.frame_span());
    const Eigen::VectorXd y = yingram_frame(cmnd(difference_fft(x, cfg.window, cfg.tau_max)), grid);

    // Oracle: Eqs. 1-4 evaluated directly.
    std::vector<double> xs(x.data(), x.data() + x.size());
    const auto ref = test::reference_cmnd(xs, cfg.window, cfg.tau_max);
    for (int b = 0; b < grid.size; b += 7) {
        const double c = grid.lag(b);
        const double lo = std::floor(c), hi = std::ceil(c);
        const double expect = hi == lo ? ref[lo] : ref[lo] + (ref[hi] - ref[lo]) * (c - lo);
        CHECK(y(b) == doctest::Approx(expect).epsilon(1e-6));
    }
    const double target = grid.bin_of_midi(69.0);
    CHECK(std::abs(principal_dip(y, grid) - target) <= 1.0);
}

TEST_CASE("yingram framing and shape") {
    const Waveform w = test::sine(220.0, 32768);
    const FeatureMatrix y = yingram(w);
    CHECK(y.kind == FeatureKind::yingram);
    CHECK(y.rows() == 128);
    CHECK(y.cols() == 1570);
    CHECK(y.hop == 256);
    CHECK(frame_count(32769, 256) == 129);
    CHECK(frame_count(0, 256) == 0);

    const FeatureMatrix quiet = yingram(test::silence(5000));
    CHECK((quiet.data.array() == 1.0f).all());
    const FeatureMatrix c = cmnd_matrix(test::silence(5000));
    CHECK(c.cols() == 2048);
    CHECK((c.data.array() == 1.0f).all());

    CHECK_THROWS_AS(yingram(test::sine(220.0, 1000, 16000)), ConfigError);
}

TEST_CASE("a semitone raises the principal dip by 20 bins") {
    const MidiLagGrid grid = build_grid({});
    for (double f : {110.0, 220.0, 440.0}) {
        CAPTURE(f);
        const auto low = dip_track(yingram(test::sine(f, 22050)), grid);
        const auto high = dip_track(yingram(test::sine(f * std::exp2(1.0 / 12.0), 22050)), grid);
        const auto a = interior(low, 87), b = interior(high, 87);
        REQUIRE(a.size() == b.size());
        REQUIRE(a.size() > 50);
        for (std::size_t t = 0; t < a.size(); ++t) CHECK(std::abs(b[t] - a[t] - 20.0) <= 1.0);
    }
}

TEST_CASE("transposition equivariance for +-1 and +-2 semitone steps") {
    const MidiLagGrid grid = build_grid({});
    for (double f : {150.0, 300.0}) {
        const auto base = interior(dip_track(yingram(test::sine(f, 16384)), grid), 64);
        for (int k : {-40, -20, 20, 40}) {
            CAPTURE(f);
            CAPTURE(k);
            const auto moved =
                interior(dip_track(yingram(test::sine(f * std::exp2(k / 240.0), 16384)), grid), 64);
            REQUIRE(moved.size() == base.size());
            for (std::size_t t = 0; t < base.size(); ++t) CHECK(std::abs(moved[t] - base[t] - k) <= 1.0);
        }
    }
}

TEST_CASE("scope_extract") {
    const MidiLagGrid grid = build_grid({});
    const FeatureMatrix y = yingram(test::sine(200.0, 2048));
    const FeatureMatrix scoped = scope_extract(y, default_scope(grid));
    CHECK(scoped.cols() == 984);
    CHECK(scoped.rows() == y.rows());
    CHECK(scoped.data == y.data.middleCols(293, 984));

    const FeatureMatrix whole = scope_extract(y, {0, grid.size - 1});
    CHECK(whole.data == y.data);

    CHECK_THROWS_AS(scope_extract(y, {10, 5}), BoundsError);
    CHECK_THROWS_AS(scope_extract(y, {-1, 5}), BoundsError);
    CHECK_THROWS_AS(scope_extract(y, {0, grid.size}), BoundsError);
    FeatureMatrix mel = y;
    mel.kind = FeatureKind::mel;
    CHECK_THROWS_AS(scope_extract(mel, {0, 1}), TypeError);
}

TEST_CASE("scope_shift") {
    const MidiLagGrid grid = build_grid({});
    const Scope s = default_scope(grid);
    CHECK(scope_shift(s, 1.0, grid) == Scope{s.lo_bin - 20, s.hi_bin - 20});
    CHECK(scope_shift(s, 0.0, grid) == s);
    CHECK(scope_shift(s, -0.5, grid) == Scope{s.lo_bin + 10, s.hi_bin + 10});
    CHECK(scope_shift(s, 0.05, grid) == Scope{s.lo_bin - 1, s.hi_bin - 1});
    CHECK_THROWS_AS(scope_shift(s, 15.0, grid), RangeError);
    try {
        scope_shift(s, -20.0, grid);
        FAIL("expected RangeError");
    } catch (const RangeError& e) {
        CHECK(std::string(e.what()).find("legal shifts") != std::string::npos);
    }

    std::mt19937 gen(3);
    std::uniform_int_distribution<int> steps(-293, 293);
    for (int i = 0; i < 500; ++i) {
        const double semis = steps(gen) / 20.0;
        const Scope moved = scope_shift(s, semis, grid);
        CHECK(moved.width() == s.width());
    }
}

TEST_CASE("yin_f0 on pure tones") {
    for (double f : {220.0, 440.0}) {
        CAPTURE(f);
        const Waveform w = test::sine(f, 22050);
        const double oracle = test::fft_peak_hz(w.samples, 22050);
        CHECK(oracle == doctest::Approx(f).epsilon(1e-4));
        const FeatureMatrix f0 = yin_f0(w);
        CHECK(f0.kind == FeatureKind::f0);
        CHECK(f0.cols() == 1);
        int voiced = 0;
        for (Eigen::Index t = 0; t < f0.rows(); ++t) {
            if (f0.data(t, 0) <= 0) continue;
            ++voiced;
            CHECK(std::abs(f0.data(t, 0) - oracle) <= (f == 220.0 ? 0.5 : 1.0));
        }
        CHECK(voiced > 60);
    }
    const FeatureMatrix quiet = yin_f0(test::silence(10000));
    CHECK((quiet.data.array() == 0.0f).all());
}

TEST_CASE("yingram dip agrees with yin_f0") {
    const MidiLagGrid grid = build_grid({});
    for (double f : {110.0, 180.0, 330.0, 440.0, 700.0, 880.0}) {
        CAPTURE(f);
        const Waveform w = test::sine(f, 8192);
        const FeatureMatrix y = yingram(w);
        const FeatureMatrix f0 = yin_f0(w);
        for (Eigen::Index t = 0; t < 10; ++t) {
            const double bin = principal_dip(y.data.row(t).transpose().cast<double>(), grid);
            REQUIRE(!std::isnan(bin));
            const double hz = midi_to_hz(grid.midi(0) + bin / kBinsPerSemitone);
            CHECK(std::abs(hz / f0.data(t, 0) - 1.0) <= 0.01);
        }
    }
}
