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
 * Seeded synthetic datasets: Gaussian blobs for smoke/benchmark training and
 * a circuit-labeled task whose decision rule is generated by a ground-truth
 * MPS circuit, so the quantum branch can realize it exactly.
 */

#pragma once

#include <cstdint>

#include "hqtn/dataset.hpp"

namespace hqtn::data {

/// Gaussian blobs with unit per-dimension variance. Class c is centered at
/// separation * e_c, putting every center `separation` standard deviations
/// from the shared origin (pairwise distance separation * sqrt(2)); the
/// classes are linearly separable for separations of a few sigma.
FeatureTable make_blobs(int n_classes, int per_class, int dim, double separation,
                        std::uint64_t seed);

struct CircuitTaskConfig {
    int n_classes = 4;
    int per_class = 150;
    int dim = 32;
    int n_qubits = 3;
    int n_layers = 1;
    double score_margin = 0.05; ///< reject samples with an ambiguous teacher score
    std::uint64_t seed = 42;
};

/// Labels come from argmax of a random linear readout of the Z features of a
/// frozen random MPS circuit evaluated on hidden angles; the angles occupy
/// the first n_qubits input dimensions, the rest is low-variance noise.
FeatureTable make_circuit_task(const CircuitTaskConfig &config);

} // namespace hqtn::data
