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
 * Mel-spectrogram features: centered STFT (Hann window, reflect padding),
 * Slaney-style triangular filterbank, decibel conversion with a -80 dB
 * floor, and fixed-length vectorization.
 */

#pragma once

#include <cstddef>
#include <vector>

#include "hqtn/wav.hpp"

namespace hqtn::audio {

/// STFT and filterbank settings. The defaults reproduce the common audio
/// library behavior for a 22.05 kHz, 5 s clip: 216 frames of 128 mel bands.
struct MelParams {
    int sample_rate = 22050;
    int n_fft = 2048;
    int hop_length = 512;
    int n_mels = 128;
    double fmin = 0.0;
    double fmax = 0.0; ///< 0 means sample_rate / 2
    double db_floor = -80.0;

    [[nodiscard]] double fmax_or_nyquist() const {
        return fmax > 0.0 ? fmax : sample_rate / 2.0;
    }
};

/// T x n_mels matrix, row-major over time frames.
struct MelMatrix {
    std::vector<double> values;
    std::size_t frames = 0;
    std::size_t n_mels = 0;

    [[nodiscard]] double &at(std::size_t t, std::size_t m) { return values[t * n_mels + m]; }
    [[nodiscard]] double at(std::size_t t, std::size_t m) const { return values[t * n_mels + m]; }
};

struct VectorizedFeature {
    std::vector<double> values; ///< length t_max * n_mels, time-major
    std::size_t t_max = 0;
    std::size_t n_mels = 0;
};

/// Slaney mel scale (linear below 1 kHz, logarithmic above).
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filterbank with Slaney area normalization; n_mels rows of
/// n_fft/2 + 1 weights, row-major.
std::vector<double> mel_filterbank(const MelParams &params);

/// Power mel spectrogram of a fixed-length clip. Frames are centered with
/// reflect padding, so frame count is 1 + len / hop.
class MelExtractor {
  public:
    explicit MelExtractor(MelParams params);
    ~MelExtractor();
    MelExtractor(const MelExtractor &) = delete;
    MelExtractor &operator=(const MelExtractor &) = delete;

    [[nodiscard]] const MelParams &params() const { return params_; }

    /// Windowed STFT -> power spectrum -> filterbank. Safe to call
    /// concurrently on one instance.
    [[nodiscard]] MelMatrix mel_spectrogram(const Waveform &w) const;

  private:
    MelParams params_;
    std::vector<double> filterbank_;
    std::vector<double> window_;
    void *plan_ = nullptr; // fftw_plan
};

/// 10*log10(v / global_max) with a 1e-10 guard, clamped to >= db_floor. The
/// global maximum maps to exactly 0 dB; an all-zero matrix becomes the floor
/// everywhere.
MelMatrix power_to_db(const MelMatrix &m, double db_floor = -80.0);

/// Truncates or pads the time axis (pad value = db_floor) to t_max rows and
/// flattens time-major: element (t, f) lands at index t * n_mels + f.
VectorizedFeature fix_time_and_vectorize(const MelMatrix &m, std::size_t t_max,
                                         double pad_value = -80.0);

} // namespace hqtn::audio
