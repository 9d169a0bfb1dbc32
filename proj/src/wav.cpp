// Copyright 2026 The hqtn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hqtn/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "hqtn/errors.hpp"

namespace hqtn::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct Reader {
    const unsigned char *data;
    std::size_t size;
    std::size_t pos = 0;

    void require(std::size_t n) const {
        if (pos + n > size) {
            throw FormatError("truncated WAV file");
        }
    }
    std::uint32_t u32() {
        require(4);
        std::uint32_t v = static_cast<std::uint32_t>(data[pos]) |
                          static_cast<std::uint32_t>(data[pos + 1]) << 8 |
                          static_cast<std::uint32_t>(data[pos + 2]) << 16 |
                          static_cast<std::uint32_t>(data[pos + 3]) << 24;
        pos += 4;
        return v;
    }
    std::uint16_t u16() {
        require(2);
        std::uint16_t v = static_cast<std::uint16_t>(data[pos] | data[pos + 1] << 8);
        pos += 2;
        return v;
    }
    bool tag_is(const char *tag) {
        require(4);
        const bool match = std::memcmp(data + pos, tag, 4) == 0;
        pos += 4;
        return match;
    }
};

double decode_sample(const unsigned char *p, std::uint16_t format, int bits) {
    switch (bits) {
    case 8: // unsigned PCM
        return (static_cast<double>(*p) - 128.0) / 128.0;
    case 16: {
        const auto v = static_cast<std::int16_t>(p[0] | p[1] << 8);
        return static_cast<double>(v) / 32768.0;
    }
    case 24: {
        std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
        if ((v & 0x800000) != 0) {
            v |= ~0xFFFFFF; // sign extension
        }
        return static_cast<double>(v) / 8388608.0;
    }
    case 32: {
        if (format == kFormatIeeeFloat) {
            float f;
            std::memcpy(&f, p, 4);
            return static_cast<double>(f);
        }
        break;
    }
    default:
        break;
    }
    throw UnsupportedError("unsupported WAV sample encoding");
}

} // namespace

Waveform parse_wav(const std::vector<unsigned char> &bytes) {
    Reader r{bytes.data(), bytes.size()};
    if (!r.tag_is("RIFF")) {
        throw FormatError("not a RIFF file");
    }
    r.u32(); // declared riff size; trust the actual buffer instead
    if (!r.tag_is("WAVE")) {
        throw FormatError("RIFF file is not WAVE");
    }

    bool have_fmt = false;
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
    const unsigned char *pcm = nullptr;
    std::size_t pcm_size = 0;

    while (r.pos + 8 <= r.size) {
        r.require(8);
        char chunk_id[4];
        std::memcpy(chunk_id, r.data + r.pos, 4);
        r.pos += 4;
        const std::uint32_t chunk_size = r.u32();
        r.require(chunk_size);
        const std::size_t body = r.pos;

        if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
            if (chunk_size < 16) {
                throw FormatError("fmt chunk too small");
            }
            format = r.u16();
            channels = r.u16();
            sample_rate = r.u32();
            r.u32(); // byte rate
            r.u16(); // block align
            bits = r.u16();
            if (format == kFormatExtensible) {
                if (chunk_size < 40) {
                    throw FormatError("extensible fmt chunk too small");
                }
                r.u16(); // cbSize
                r.u16(); // valid bits
                r.u32(); // channel mask
                format = r.u16(); // first two GUID bytes carry the codec
            }
            have_fmt = true;
        } else if (std::memcmp(chunk_id, "data", 4) == 0) {
            pcm = r.data + body;
            pcm_size = chunk_size;
        }
        r.pos = body + chunk_size + (chunk_size % 2); // chunks are word-aligned
    }

    if (!have_fmt || pcm == nullptr) {
        throw FormatError("WAV file missing fmt or data chunk");
    }
    if (format != kFormatPcm && format != kFormatIeeeFloat) {
        throw UnsupportedError("unsupported WAV codec " + std::to_string(format));
    }
    if (format == kFormatPcm && bits != 8 && bits != 16 && bits != 24) {
        throw UnsupportedError("unsupported PCM bit depth " + std::to_string(bits));
    }
    if (format == kFormatIeeeFloat && bits != 32) {
        throw UnsupportedError("unsupported float bit depth " + std::to_string(bits));
    }
    if (channels == 0 || channels > 2) {
        throw UnsupportedError("only mono or stereo WAV supported, got " +
                               std::to_string(channels) + " channels");
    }
    if (sample_rate == 0) {
        throw FormatError("WAV sample rate is zero");
    }

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    const std::size_t n_frames = pcm_size / frame_bytes;
    if (n_frames == 0) {
        throw FormatError("WAV data chunk holds no samples");
    }

    Waveform w;
    w.sample_rate = static_cast<int>(sample_rate);
    w.samples.resize(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::size_t ch = 0; ch < channels; ++ch) {
            acc += decode_sample(pcm + i * frame_bytes + ch * bytes_per_sample, format, bits);
        }
        w.samples[i] = acc / channels;
    }
    return w;
}

Waveform load_wav(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open WAV file: " + path);
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12) {
        throw FormatError("file too small to be a WAV: " + path);
    }
    return parse_wav(bytes);
}

Waveform resample(const Waveform &w, int target_rate) {
    if (target_rate <= 0) {
        throw ArgumentError("target sample rate must be positive");
    }
    if (w.sample_rate == target_rate) {
        return w;
    }
    const std::size_t src_len = w.samples.size();
    const auto dst_len = static_cast<std::size_t>(std::llround(
        static_cast<double>(src_len) * target_rate / w.sample_rate));

    Waveform out;
    out.sample_rate = target_rate;
    out.samples.resize(dst_len);
    const double step = static_cast<double>(w.sample_rate) / target_rate;
    for (std::size_t i = 0; i < dst_len; ++i) {
        const double pos = static_cast<double>(i) * step;
        const auto lo = std::min(static_cast<std::size_t>(pos), src_len - 1);
        const std::size_t hi = std::min(lo + 1, src_len - 1);
        const double frac = pos - static_cast<double>(lo);
        out.samples[i] = w.samples[lo] + frac * (w.samples[hi] - w.samples[lo]);
    }
    return out;
}

Waveform pad_or_truncate(const Waveform &w, double max_seconds) {
    if (max_seconds <= 0.0) {
        throw ArgumentError("max_seconds must be positive");
    }
    const auto target = static_cast<std::size_t>(
        std::llround(max_seconds * static_cast<double>(w.sample_rate)));
    Waveform out;
    out.sample_rate = w.sample_rate;
    out.samples = w.samples;
    out.samples.resize(target, 0.0);
    return out;
}

std::vector<unsigned char> encode_wav_pcm16(const Waveform &w) {
    const std::size_t n = w.samples.size();
    const std::uint32_t data_size = static_cast<std::uint32_t>(n * 2);
    std::vector<unsigned char> out;
    out.reserve(44 + data_size);

    auto push_u32 = [&out](std::uint32_t v) {
        out.push_back(v & 0xFF);
        out.push_back((v >> 8) & 0xFF);
        out.push_back((v >> 16) & 0xFF);
        out.push_back((v >> 24) & 0xFF);
    };
    auto push_u16 = [&out](std::uint16_t v) {
        out.push_back(v & 0xFF);
        out.push_back((v >> 8) & 0xFF);
    };
    auto push_tag = [&out](const char *tag) {
        out.insert(out.end(), tag, tag + 4);
    };

    push_tag("RIFF");
    push_u32(36 + data_size);
    push_tag("WAVE");
    push_tag("fmt ");
    push_u32(16);
    push_u16(kFormatPcm);
    push_u16(1);
    push_u32(static_cast<std::uint32_t>(w.sample_rate));
    push_u32(static_cast<std::uint32_t>(w.sample_rate) * 2);
    push_u16(2);
    push_u16(16);
    push_tag("data");
    push_u32(data_size);
    for (std::size_t i = 0; i < n; ++i) {
        const double clamped = std::min(1.0, std::max(-1.0, w.samples[i]));
        const auto v = static_cast<std::int16_t>(std::lround(clamped * 32767.0));
        push_u16(static_cast<std::uint16_t>(v));
    }
    return out;
}

} // namespace hqtn::audio
