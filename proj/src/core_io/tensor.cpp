// SPDX-License-Identifier: Apache-2.0
#include "vox/tensor.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <string>

#include "vox/error.hpp"

namespace vox {

namespace {

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

}  // namespace

std::vector<unsigned char> tensor_encode(const FeatureMatrix& f) {
    f.validate();
    std::vector<unsigned char> out;
    out.reserve(kTensorHeaderSize + static_cast<std::size_t>(f.data.size()) * 4);
    for (char c : {'N', 'S', 'Y', 'F'}) out.push_back(static_cast<unsigned char>(c));
    out.push_back(kTensorVersion);
    out.push_back(static_cast<unsigned char>(f.kind));
    put_u32(out, static_cast<std::uint32_t>(f.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(f.hop));
    put_u32(out, static_cast<std::uint32_t>(f.rows()));
    put_u32(out, static_cast<std::uint32_t>(f.cols()));
    // RowMatrixXf storage is already row-major.
    for (Eigen::Index i = 0; i < f.data.size(); ++i) put_u32(out, std::bit_cast<std::uint32_t>(f.data.data()[i]));
    return out;
}

FeatureMatrix tensor_decode(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < kTensorHeaderSize) throw LengthError("nsyf: truncated header");
    if (bytes[0] != 'N' || bytes[1] != 'S' || bytes[2] != 'Y' || bytes[3] != 'F') {
        throw FormatError("nsyf: bad magic");
    }
    if (bytes[4] != kTensorVersion) throw FormatError("nsyf: unsupported version " + std::to_string(bytes[4]));
    if (bytes[5] > static_cast<unsigned char>(FeatureKind::f0)) {
        throw FormatError("nsyf: bad kind " + std::to_string(bytes[5]));
    }
    FeatureMatrix f;
    f.kind = static_cast<FeatureKind>(bytes[5]);
    f.sample_rate = static_cast<int>(get_u32(&bytes[6]));
    f.hop = static_cast<int>(get_u32(&bytes[10]));
    const std::uint64_t rows = get_u32(&bytes[14]);
    const std::uint64_t cols = get_u32(&bytes[18]);
    const std::uint64_t expected = kTensorHeaderSize + rows * cols * 4;
    if (bytes.size() != expected) {
        throw LengthError("nsyf: payload holds " + std::to_string(bytes.size() - kTensorHeaderSize) +
                          " bytes, header implies " + std::to_string(rows * cols * 4));
    }
    f.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    const unsigned char* p = bytes.data() + kTensorHeaderSize;
    for (Eigen::Index i = 0; i < f.data.size(); ++i, p += 4) f.data.data()[i] = std::bit_cast<float>(get_u32(p));
    f.validate();
    return f;
}

void tensor_write(const FeatureMatrix& f, const std::filesystem::path& path) {
    const auto bytes = tensor_encode(f);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

FeatureMatrix tensor_read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return tensor_decode(bytes);
}

}  // namespace vox
