// SPDX-License-Identifier: Apache-2.0
#include "vox/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "vox/error.hpp"
#include "vox/perturb.hpp"
#include "vox/pgm.hpp"
#include "vox/psola.hpp"
#include "vox/resample.hpp"
#include "vox/spectral.hpp"
#include "vox/tensor.hpp"
#include "vox/wav.hpp"
#include "vox/yin.hpp"

namespace vox::cli {

namespace {

struct Globals {
    std::uint64_t seed = 0;
    int sample_rate = 22050;
    bool quiet = false;
};

struct AnalyzeArgs {
    std::string feature;
    std::string input;
    std::string output;
    std::optional<int> hop;
    std::optional<double> scope_shift;
    std::optional<std::string> render;
};

struct PerturbArgs {
    std::string chain;
    std::string input;
    std::string output;
    std::optional<std::string> manifest;
};

struct PitchShiftArgs {
    double semitones = 0.0;
    std::string input;
    std::string output;
    bool no_preserve_formants = false;
};

struct TsmArgs {
    double ratio = 1.0;
    std::string input;
    std::string output;
};

class Session {
public:
    Session(const Globals& g, std::ostream& err) : g_(g), err_(err) {}

    void note(const std::string& msg) const {
        if (!g_.quiet) err_ << "vox: " << msg << "\n";
    }

    void report(const Diagnostics& diag) const {
        for (const auto& w : diag.warnings) note("warning: " + w);
    }

    Waveform load(const std::string& path) const {
        Waveform w = wav_read(path);
        if (w.sample_rate != g_.sample_rate) {
            note("resampling " + path + " from " + std::to_string(w.sample_rate) + " Hz to " +
                 std::to_string(g_.sample_rate) + " Hz");
            w = resample(w, g_.sample_rate);
        }
        return w;
    }

    void save(const Waveform& w, const std::string& path) const {
        const std::size_t clipped = wav_write(w, path, WavEncoding::float32);
        if (clipped > 0) note("warning: " + std::to_string(clipped) + " samples clipped on write");
    }

    [[nodiscard]] const Globals& globals() const { return g_; }

private:
    const Globals& g_;
    std::ostream& err_;
};

int analyze(const Session& s, const AnalyzeArgs& a) {
    if (a.scope_shift && a.feature != "yingram") {
        throw CLI::ValidationError("--scope-shift", "only valid with --feature yingram");
    }
    if (a.hop && *a.hop < 1) throw CLI::ValidationError("--hop", "must be >= 1");
    const Waveform w = s.load(a.input);

    FeatureMatrix f;
    if (a.feature == "mel" || a.feature == "energy") {
        spectral::MelConfig cfg;
        cfg.sample_rate = s.globals().sample_rate;
        cfg.fmax = std::min(cfg.fmax, cfg.sample_rate / 2.0);
        if (a.hop) cfg.hop = *a.hop;
        f = spectral::log_mel(w, cfg);
        if (a.feature == "energy") f = spectral::energy(f);
    } else {
        yin::YinConfig cfg;
        cfg.sample_rate = s.globals().sample_rate;
        if (a.hop) cfg.hop = *a.hop;
        if (a.feature == "f0") {
            f = yin::yin_f0(w, cfg);
        } else {
            f = yin::yingram(w, cfg);
            if (a.scope_shift) {
                const auto grid = yin::build_grid(cfg);
                f = yin::scope_extract(f, yin::scope_shift(yin::default_scope(grid), *a.scope_shift, grid));
            }
        }
    }
    tensor_write(f, a.output);
    if (a.render) pgm_render(f, *a.render);
    return kOk;
}

int perturb_cmd(const Session& s, const PerturbArgs& a) {
    const Waveform w = s.load(a.input);
    Rng rng(s.globals().seed);
    Diagnostics diag;
    const auto chain = perturb::chain_from_string(a.chain);
    auto [out, params] = chain == perturb::Chain::f ? perturb::perturb_f(w, rng, &diag) : perturb::perturb_g(w, rng, &diag);
    s.report(diag);
    s.save(out, a.output);
    const std::string manifest_path = a.manifest.value_or(a.output + ".json");
    std::ofstream m(manifest_path, std::ios::trunc);
    if (!m) throw IoError("cannot create " + manifest_path);
    m << perturb::manifest_json(params);
    if (!m) throw IoError("write failed: " + manifest_path);
    return kOk;
}

int pitch_shift_cmd(const Session& s, const PitchShiftArgs& a) {
    if (!std::isfinite(a.semitones)) throw DomainError("--semitones must be finite");
    const Waveform w = s.load(a.input);
    Diagnostics diag;
    const Waveform out = psola::psola_pitch_shift(w, std::exp2(a.semitones / 12.0), !a.no_preserve_formants, &diag);
    s.report(diag);
    s.save(out, a.output);
    return kOk;
}

int tsm_cmd(const Session& s, const TsmArgs& a) {
    const Waveform w = s.load(a.input);
    Diagnostics diag;
    const Waveform out = psola::psola_time_stretch(w, a.ratio, &diag);
    s.report(diag);
    s.save(out, a.output);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Speech analysis features, information perturbation and PSOLA transforms", "vox"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--sample-rate", g.sample_rate, "Processing rate; inputs are resampled to it")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_flag("--quiet", g.quiet, "Suppress notices and warnings");

    AnalyzeArgs an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Extract a feature matrix to an NSYF file");
    analyze_cmd->add_option("--feature", an.feature, "yingram | mel | energy | f0")
        ->required()
        ->check(CLI::IsMember({"yingram", "mel", "energy", "f0"}));
    analyze_cmd->add_option("--input", an.input, "Input WAV")->required();
    analyze_cmd->add_option("--output", an.output, "Output NSYF")->required();
    analyze_cmd->add_option("--hop", an.hop, "Hop length override in samples");
    analyze_cmd->add_option("--scope-shift", an.scope_shift, "Write the default yingram scope shifted by semitones");
    analyze_cmd->add_option("--render", an.render, "Also write a PGM image");

    PerturbArgs pa;
    auto* perturb_sub = app.add_subcommand("perturb", "Apply the f or g perturbation chain");
    perturb_sub->add_option("--chain", pa.chain, "f | g")->required()->check(CLI::IsMember({"f", "g"}));
    perturb_sub->add_option("--input", pa.input, "Input WAV")->required();
    perturb_sub->add_option("--output", pa.output, "Output WAV")->required();
    perturb_sub->add_option("--manifest", pa.manifest, "JSON manifest path (default <output>.json)");

    PitchShiftArgs ps;
    auto* pitch_sub = app.add_subcommand("pitch-shift", "PSOLA pitch shift");
    pitch_sub->add_option("--semitones", ps.semitones, "Shift in semitones")->required();
    pitch_sub->add_option("--input", ps.input, "Input WAV")->required();
    pitch_sub->add_option("--output", ps.output, "Output WAV")->required();
    pitch_sub->add_flag("--no-preserve-formants", ps.no_preserve_formants, "Move formants with the pitch");

    TsmArgs ts;
    auto* tsm_sub = app.add_subcommand("tsm", "PSOLA time-scale modification");
    tsm_sub->add_option("--ratio", ts.ratio, "Duration ratio")->required();
    tsm_sub->add_option("--input", ts.input, "Input WAV")->required();
    tsm_sub->add_option("--output", ts.output, "Output WAV")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        const Session session(g, err);
        if (analyze_cmd->parsed()) return analyze(session, an);
        if (perturb_sub->parsed()) return perturb_cmd(session, pa);
        if (pitch_sub->parsed()) return pitch_shift_cmd(session, ps);
        return tsm_cmd(session, ts);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kBadArgs;
    } catch (const IoError& e) {
        err << "vox: " << e.what() << "\n";
        return kIoError;
    } catch (const FormatError& e) {
        err << "vox: " << e.what() << "\n";
        return kIoError;
    } catch (const UnsupportedError& e) {
        err << "vox: " << e.what() << "\n";
        return kIoError;
    } catch (const LengthError& e) {
        err << "vox: " << e.what() << "\n";
        return kIoError;
    } catch (const Error& e) {
        err << "vox: " << e.what() << "\n";
        return kDspError;
    }
}

}  // namespace vox::cli
