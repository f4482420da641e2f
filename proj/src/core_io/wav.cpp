// SPDX-License-Identifier: Apache-2.0
#include "vox/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "vox/error.hpp"

namespace vox {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
public:
    explicit ByteReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }
    [[nodiscard]] std::size_t pos() const { return pos_; }

    void need(std::size_t n) const {
        if (remaining() < n) throw FormatError("wav: unexpected end of data");
    }
    std::uint16_t u16() {
        need(2);
        const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
        pos_ += 4;
        return v;
    }
    std::string tag() {
        need(4);
        std::string t(reinterpret_cast<const char*>(&bytes_[pos_]), 4);
        pos_ += 4;
        return t;
    }
    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }

private:
    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 0;
};

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

Waveform wav_decode(const std::vector<unsigned char>& bytes) {
    ByteReader in(bytes);
    if (in.remaining() < 12 || in.tag() != "RIFF") throw FormatError("wav: missing RIFF header");
    in.u32();
    if (in.tag() != "WAVE") throw FormatError("wav: missing WAVE tag");

    std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    std::size_t data_pos = 0, data_size = 0;
    bool have_data = false;

    while (in.remaining() >= 8) {
        const std::string id = in.tag();
        const std::uint32_t size = in.u32();
        if (id == "fmt ") {
            if (size < 16) throw FormatError("wav: fmt chunk too small");
            in.need(size);
            const std::size_t start = in.pos();
            format = in.u16();
            channels = in.u16();
            rate = in.u32();
            in.u32();
            block_align = in.u16();
            bits = in.u16();
            if (format == kFormatExtensible) {
                if (size < 40) throw FormatError("wav: truncated extensible fmt chunk");
                in.skip(8);  // cbSize, valid bits, channel mask
                format = in.u16();
            }
            in.skip(size - (in.pos() - start));
            have_fmt = true;
        } else if (id == "data") {
            data_pos = in.pos();
            data_size = std::min<std::size_t>(size, in.remaining());
            have_data = true;
            break;
        } else {
            in.skip(std::min<std::size_t>(size, in.remaining()));
        }
        if ((size & 1u) && in.remaining() > 0) in.skip(1);
    }
    if (!have_fmt) throw FormatError("wav: no fmt chunk");
    if (!have_data) throw FormatError("wav: no data chunk");
    if (channels == 0 || rate == 0) throw FormatError("wav: zero channels or sample rate");

    const bool pcm16 = format == kFormatPcm && bits == 16;
    const bool float32 = format == kFormatFloat && bits == 32;
    if (!pcm16 && !float32) {
        throw UnsupportedError("wav: unsupported encoding (format " + std::to_string(format) + ", " +
                               std::to_string(bits) + " bits)");
    }
    const std::size_t width = bits / 8;
    if (block_align != width * channels) throw FormatError("wav: inconsistent block alignment");

    const std::size_t frames = data_size / block_align;
    Samples out(static_cast<Eigen::Index>(frames));
    const unsigned char* p = bytes.data() + data_pos;
    for (std::size_t i = 0; i < frames; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < channels; ++c, p += width) {
            if (pcm16) {
                const auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
                acc += static_cast<double>(v) / 32768.0;
            } else {
                const std::uint32_t u = p[0] | (p[1] << 8) | (p[2] << 16) | (std::uint32_t(p[3]) << 24);
                acc += static_cast<double>(std::bit_cast<float>(u));
            }
        }
        out(static_cast<Eigen::Index>(i)) = static_cast<float>(channels == 1 ? acc : acc / channels);
    }
    return Waveform(std::move(out), static_cast<int>(rate));
}

std::vector<unsigned char> wav_encode(const Waveform& w, WavEncoding encoding, std::size_t* clipped) {
    if (w.sample_rate < 1) throw DomainError("wav: sample rate must be positive");
    const std::uint16_t bits = encoding == WavEncoding::pcm16 ? 16 : 32;
    const std::uint16_t format = encoding == WavEncoding::pcm16 ? kFormatPcm : kFormatFloat;
    const std::uint32_t width = bits / 8;
    const auto data_size = static_cast<std::uint32_t>(w.size() * width);

    std::vector<unsigned char> out;
    out.reserve(44 + data_size);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_size);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, format);
    put_u16(out, 1);
    put_u32(out, static_cast<std::uint32_t>(w.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(w.sample_rate) * width);
    put_u16(out, static_cast<std::uint16_t>(width));
    put_u16(out, bits);
    put_tag(out, "data");
    put_u32(out, data_size);

    std::size_t n_clipped = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        float s = w.samples(i);
        if (s > 1.0f || s < -1.0f) {
            s = s > 1.0f ? 1.0f : -1.0f;
            ++n_clipped;
        }
        if (encoding == WavEncoding::pcm16) {
            const double scaled = std::clamp(std::round(static_cast<double>(s) * 32768.0), -32768.0, 32767.0);
            const auto v = static_cast<std::int16_t>(scaled);
            put_u16(out, static_cast<std::uint16_t>(v));
        } else {
            put_u32(out, std::bit_cast<std::uint32_t>(s));
        }
    }
    if (clipped) *clipped = n_clipped;
    return out;
}

Waveform wav_read(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) throw IoError("read failed: " + path.string());
    return wav_decode(bytes);
}

std::size_t wav_write(const Waveform& w, const std::filesystem::path& path, WavEncoding encoding) {
    std::size_t clipped = 0;
    const auto bytes = wav_encode(w, encoding, &clipped);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot create " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed: " + path.string());
    return clipped;
}

}  // namespace vox
