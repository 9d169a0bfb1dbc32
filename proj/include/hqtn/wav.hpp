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

/**
 * @file
 * RIFF/WAVE loading plus the two waveform-level preprocessing steps:
 * resampling and fixed-duration padding/truncation.
 */

#pragma once

#include <string>
#include <vector>

namespace hqtn::audio {

struct Waveform {
    std::vector<double> samples; ///< mono amplitudes, roughly [-1, 1]
    int sample_rate = 0;         ///< Hz

    [[nodiscard]] double duration_seconds() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

/// Loads a PCM 8/16/24-bit or 32-bit float WAV file. Stereo is averaged to
/// mono; integer PCM is normalized by the type's maximum magnitude.
/// Throws IoError (missing/short file), FormatError (malformed RIFF), or
/// UnsupportedError (codec, bit depth, channel count).
Waveform load_wav(const std::string &path);

/// Parses WAV bytes already in memory; same contract as load_wav.
Waveform parse_wav(const std::vector<unsigned char> &bytes);

/// Linear-interpolation resampler. Output length is round(len * target/source);
/// returns the input unchanged when the rates already match.
Waveform resample(const Waveform &w, int target_rate);

/// Zero-pads or truncates at the end to exactly max_seconds * sample_rate
/// samples.
Waveform pad_or_truncate(const Waveform &w, double max_seconds);

/// Serializes a mono waveform as 16-bit PCM (test and tooling helper).
std::vector<unsigned char> encode_wav_pcm16(const Waveform &w);

} // namespace hqtn::audio
