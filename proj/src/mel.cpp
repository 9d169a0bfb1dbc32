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

#include "hqtn/mel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "hqtn/errors.hpp"

namespace hqtn::audio {

namespace {

// Slaney scale constants: linear below 1 kHz at 200/3 Hz per mel, then
// logarithmic with log(6.4) per 27 mels.
constexpr double kMinLogHz = 1000.0;
constexpr double kMinLogMel = 15.0;
constexpr double kHzPerMel = 200.0 / 3.0;
const double kLogStep = std::log(6.4) / 27.0;

// FFTW plan creation/destruction is not thread-safe.
std::mutex &fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    double *in = nullptr;
    fftw_complex *out = nullptr;
    FftwBuffer(int n_fft, int n_bins) {
        in = fftw_alloc_real(static_cast<std::size_t>(n_fft));
        out = fftw_alloc_complex(static_cast<std::size_t>(n_bins));
    }
    ~FftwBuffer() {
        fftw_free(in);
        fftw_free(out);
    }
    FftwBuffer(const FftwBuffer &) = delete;
    FftwBuffer &operator=(const FftwBuffer &) = delete;
};

/// Reflect index (no edge repetition): [-1] -> [1], [len] -> [len-2].
std::size_t reflect_index(std::ptrdiff_t j, std::ptrdiff_t len) {
    while (j < 0 || j >= len) {
        if (j < 0) {
            j = -j;
        }
        if (j >= len) {
            j = 2 * len - 2 - j;
        }
    }
    return static_cast<std::size_t>(j);
}

} // namespace

double hz_to_mel(double hz) {
    if (hz < kMinLogHz) {
        return hz / kHzPerMel;
    }
    return kMinLogMel + std::log(hz / kMinLogHz) / kLogStep;
}

double mel_to_hz(double mel) {
    if (mel < kMinLogMel) {
        return mel * kHzPerMel;
    }
    return kMinLogHz * std::exp((mel - kMinLogMel) * kLogStep);
}

std::vector<double> mel_filterbank(const MelParams &params) {
    const int n_bins = params.n_fft / 2 + 1;
    const int n_mels = params.n_mels;
    const double mel_lo = hz_to_mel(params.fmin);
    const double mel_hi = hz_to_mel(params.fmax_or_nyquist());

    std::vector<double> mel_f(static_cast<std::size_t>(n_mels) + 2);
    for (int i = 0; i < n_mels + 2; ++i) {
        mel_f[static_cast<std::size_t>(i)] =
            mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));
    }

    std::vector<double> weights(static_cast<std::size_t>(n_mels) * n_bins, 0.0);
    for (int m = 0; m < n_mels; ++m) {
        const double f_lo = mel_f[static_cast<std::size_t>(m)];
        const double f_mid = mel_f[static_cast<std::size_t>(m) + 1];
        const double f_hi = mel_f[static_cast<std::size_t>(m) + 2];
        const double enorm = 2.0 / (f_hi - f_lo);
        for (int k = 0; k < n_bins; ++k) {
            const double freq =
                static_cast<double>(k) * params.sample_rate / params.n_fft;
            const double rising = (freq - f_lo) / (f_mid - f_lo);
            const double falling = (f_hi - freq) / (f_hi - f_mid);
            const double w = std::max(0.0, std::min(rising, falling));
            weights[static_cast<std::size_t>(m) * n_bins + k] = w * enorm;
        }
    }
    return weights;
}

MelExtractor::MelExtractor(MelParams params) : params_(params) {
    if (params_.n_fft <= 0 || params_.hop_length <= 0 || params_.n_mels <= 0 ||
        params_.sample_rate <= 0) {
        throw ArgumentError("mel parameters must be positive");
    }
    filterbank_ = mel_filterbank(params_);

    // Periodic Hann window.
    window_.resize(static_cast<std::size_t>(params_.n_fft));
    for (int i = 0; i < params_.n_fft; ++i) {
        window_[static_cast<std::size_t>(i)] =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / params_.n_fft));
    }

    const int n_bins = params_.n_fft / 2 + 1;
    FftwBuffer scratch(params_.n_fft, n_bins);
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan_ = fftw_plan_dft_r2c_1d(params_.n_fft, scratch.in, scratch.out, FFTW_ESTIMATE);
}

MelExtractor::~MelExtractor() {
    if (plan_ != nullptr) {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
}

MelMatrix MelExtractor::mel_spectrogram(const Waveform &w) const {
    if (w.samples.empty()) {
        throw ArgumentError("cannot compute a mel spectrogram of an empty waveform");
    }
    const int n_fft = params_.n_fft;
    const int hop = params_.hop_length;
    const int n_bins = n_fft / 2 + 1;
    const auto len = static_cast<std::ptrdiff_t>(w.samples.size());
    const std::ptrdiff_t pad = n_fft / 2;
    const std::size_t n_frames = 1 + w.samples.size() / static_cast<std::size_t>(hop);

    MelMatrix mel;
    mel.frames = n_frames;
    mel.n_mels = static_cast<std::size_t>(params_.n_mels);
    mel.values.assign(n_frames * mel.n_mels, 0.0);

    // Fresh buffers per call keep one extractor usable from many threads.
    FftwBuffer buf(n_fft, n_bins);
    std::vector<double> power(static_cast<std::size_t>(n_bins));

    for (std::size_t t = 0; t < n_frames; ++t) {
        const std::ptrdiff_t start =
            static_cast<std::ptrdiff_t>(t) * hop - pad; // centered frame
        for (int i = 0; i < n_fft; ++i) {
            const std::size_t src = reflect_index(start + i, len);
            buf.in[i] = w.samples[src] * window_[static_cast<std::size_t>(i)];
        }
        fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_), buf.in, buf.out);
        for (int k = 0; k < n_bins; ++k) {
            power[static_cast<std::size_t>(k)] =
                buf.out[k][0] * buf.out[k][0] + buf.out[k][1] * buf.out[k][1];
        }
        for (int m = 0; m < params_.n_mels; ++m) {
            const double *row = filterbank_.data() + static_cast<std::size_t>(m) * n_bins;
            double acc = 0.0;
            for (int k = 0; k < n_bins; ++k) {
                acc += row[k] * power[static_cast<std::size_t>(k)];
            }
            mel.at(t, static_cast<std::size_t>(m)) = acc;
        }
    }
    return mel;
}

MelMatrix power_to_db(const MelMatrix &m, double db_floor) {
    constexpr double amin = 1e-10;
    MelMatrix out;
    out.frames = m.frames;
    out.n_mels = m.n_mels;
    out.values.resize(m.values.size());

    double global_max = 0.0;
    for (const double v : m.values) {
        global_max = std::max(global_max, v);
    }
    if (global_max <= 0.0) {
        std::fill(out.values.begin(), out.values.end(), db_floor);
        return out;
    }
    const double ref = std::max(global_max, amin);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        const double db = 10.0 * std::log10(std::max(m.values[i], amin) / ref);
        out.values[i] = std::max(db, db_floor);
    }
    return out;
}

VectorizedFeature fix_time_and_vectorize(const MelMatrix &m, std::size_t t_max,
                                         double pad_value) {
    if (t_max == 0) {
        throw ArgumentError("t_max must be positive");
    }
    VectorizedFeature feature;
    feature.t_max = t_max;
    feature.n_mels = m.n_mels;
    feature.values.assign(t_max * m.n_mels, pad_value);
    const std::size_t rows = std::min(m.frames, t_max);
    std::copy(m.values.begin(),
              m.values.begin() + static_cast<std::ptrdiff_t>(rows * m.n_mels),
              feature.values.begin());
    return feature;
}

} // namespace hqtn::audio
