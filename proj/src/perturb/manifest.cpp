// SPDX-License-Identifier: Apache-2.0
#include <string>

#include <json.hpp>

#include "vox/error.hpp"
#include "vox/perturb.hpp"

namespace vox::perturb {

std::string manifest_json(const PerturbParams& params) {
    nlohmann::ordered_json peq = nlohmann::ordered_json::array();
    for (const auto& band : params.peq.bands()) {
        peq.push_back({{"kind", to_string(band.kind)}, {"fc", band.fc}, {"q", band.q}, {"gain_db", band.gain_db}});
    }
    const nlohmann::ordered_json doc = {
        {"seed", params.seed},
        {"chain", to_string(params.chain)},
        {"fs_ratio", params.fs_ratio},
        {"pr_shift_ratio", params.pr_shift_ratio},
        {"pr_range_ratio", params.pr_range_ratio},
        {"peq", peq},
    };
    return doc.dump(2) + "\n";
}

PerturbParams parse_manifest(std::string_view json) {
    try {
        const auto doc = nlohmann::json::parse(json);
        PerturbParams p;
        p.seed = doc.at("seed").get<std::uint64_t>();
        p.chain = chain_from_string(doc.at("chain").get<std::string>());
        p.fs_ratio = doc.at("fs_ratio").get<double>();
        p.pr_shift_ratio = doc.at("pr_shift_ratio").get<double>();
        p.pr_range_ratio = doc.at("pr_range_ratio").get<double>();
        const auto& peq = doc.at("peq");
        if (!peq.is_array() || peq.size() != kPeakCount + 2) throw FormatError("manifest: peq must list 10 filters");
        auto band = [&](std::size_t i) {
            const auto& e = peq.at(i);
            return FilterBand{filter_kind_from_string(e.at("kind").get<std::string>()), e.at("fc").get<double>(),
                              e.at("q").get<double>(), e.at("gain_db").get<double>()};
        };
        p.peq.low_shelf = band(0);
        for (std::size_t i = 0; i < p.peq.peaks.size(); ++i) p.peq.peaks[i] = band(i + 1);
        p.peq.high_shelf = band(kPeakCount + 1);
        p.peq.validate();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    } catch (const DomainError& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    }
}

}  // namespace vox::perturb
