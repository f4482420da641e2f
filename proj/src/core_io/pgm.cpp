// SPDX-License-Identifier: Apache-2.0
#include "vox/pgm.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "vox/error.hpp"

namespace vox {

std::vector<unsigned char> pgm_encode(const FeatureMatrix& f) {
    if (f.rows() < 1 || f.cols() < 1) throw BoundsError("pgm: matrix must have at least one row and column");
    const Eigen::Index width = f.rows();
    const Eigen::Index height = f.cols();
    const std::string header = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.reserve(header.size() + static_cast<std::size_t>(width * height));

    const double lo = f.data.minCoeff();
    const double hi = f.data.maxCoeff();
    const double span = hi - lo;
    for (Eigen::Index y = 0; y < height; ++y) {
        const Eigen::Index channel = height - 1 - y;
        for (Eigen::Index x = 0; x < width; ++x) {
            const double v = span > 0.0 ? (f.data(x, channel) - lo) / span : 0.0;
            out.push_back(static_cast<unsigned char>(std::lround(255.0 * v)));
        }
    }
    return out;
}

void pgm_render(const FeatureMatrix& f, const std::filesystem::path& path) {
    const auto bytes = pgm_encode(f);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace vox
