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
 * Seeded randomness helpers. Standard-library distributions are
 * implementation-defined, so uniform draws are mapped from raw engine output
 * directly; the same seed yields the same stream on every platform.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace hqtn {

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64 &gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_in(std::mt19937_64 &gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

/// Uniform integer in [0, bound) by rejection, bias-free.
inline std::uint64_t uniform_index(std::mt19937_64 &gen, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % bound;
}

/// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a per-(run, item) seed from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(base ^ mix_seed(a ^ mix_seed(b)));
}

/// Standard normal pair via Box-Muller on deterministic uniforms.
inline double normal01(std::mt19937_64 &gen) {
    double u1 = uniform01(gen);
    double u2 = uniform01(gen);
    while (u1 <= 0.0) {
        u1 = uniform01(gen);
    }
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

/// Seeded Fisher-Yates shuffle.
template <class T> void shuffle_indices(std::vector<T> &v, std::mt19937_64 &gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_index(gen, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace hqtn
