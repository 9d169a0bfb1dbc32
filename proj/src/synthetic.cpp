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

#include "hqtn/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hqtn/errors.hpp"
#include "hqtn/mps_circuit.hpp"
#include "hqtn/rng.hpp"

namespace hqtn::data {

FeatureTable make_blobs(int n_classes, int per_class, int dim, double separation,
                        std::uint64_t seed) {
    if (n_classes < 2 || per_class < 1 || dim < n_classes) {
        throw ArgumentError("blob task needs n_classes >= 2 and dim >= n_classes");
    }
    std::mt19937_64 gen(seed);
    const double center_scale = separation;

    FeatureTable table;
    table.dim = dim;
    table.n_classes = n_classes;
    for (int c = 0; c < n_classes; ++c) {
        for (int i = 0; i < per_class; ++i) {
            FeatureRecord record;
            record.label = c;
            record.dataset_tag = "synthetic";
            record.features.resize(static_cast<std::size_t>(dim));
            for (int d = 0; d < dim; ++d) {
                record.features[static_cast<std::size_t>(d)] =
                    normal01(gen) + (d == c ? center_scale : 0.0);
            }
            table.records.push_back(std::move(record));
        }
    }
    return table;
}

FeatureTable make_circuit_task(const CircuitTaskConfig &config) {
    if (config.n_classes < 2 || config.per_class < 1 ||
        config.dim < config.n_qubits) {
        throw ArgumentError("circuit task configuration is inconsistent");
    }
    constexpr double kPi = std::numbers::pi;
    std::mt19937_64 gen(config.seed);

    const qsim::MpsCircuit circuit = qsim::build_mps_circuit(
        static_cast<std::size_t>(config.n_qubits), static_cast<std::size_t>(config.n_layers));

    std::vector<double> teacher_theta(circuit.num_params());
    for (double &angle : teacher_theta) {
        angle = uniform_in(gen, -kPi, kPi);
    }
    // Random linear readout of the Z features per class.
    std::vector<std::vector<double>> readout(
        static_cast<std::size_t>(config.n_classes),
        std::vector<double>(static_cast<std::size_t>(config.n_qubits)));
    for (auto &row : readout) {
        for (double &w : row) {
            w = uniform_in(gen, -1.0, 1.0);
        }
    }

    FeatureTable table;
    table.dim = config.dim;
    table.n_classes = config.n_classes;

    std::vector<int> remaining(static_cast<std::size_t>(config.n_classes),
                               config.per_class);
    int open_classes = config.n_classes;
    std::vector<double> u(static_cast<std::size_t>(config.n_qubits));
    const long attempt_budget = 20000L * config.n_classes * config.per_class;
    long attempts = 0;
    while (open_classes > 0) {
        if (++attempts > attempt_budget) {
            throw NumericError("circuit task rejection sampling starved; this teacher "
                               "seed leaves some class nearly unreachable");
        }
        for (double &angle : u) {
            angle = uniform_in(gen, -kPi, kPi);
        }
        const std::vector<double> z = qsim::quantum_features(circuit, u, teacher_theta);

        double best = -1e18;
        double second = -1e18;
        int label = 0;
        for (int c = 0; c < config.n_classes; ++c) {
            double score = 0.0;
            for (int q = 0; q < config.n_qubits; ++q) {
                score += readout[static_cast<std::size_t>(c)][static_cast<std::size_t>(q)] *
                         z[static_cast<std::size_t>(q)];
            }
            if (score > best) {
                second = best;
                best = score;
                label = c;
            } else if (score > second) {
                second = score;
            }
        }
        if (best - second < config.score_margin) {
            continue; // ambiguous teacher score
        }
        if (remaining[static_cast<std::size_t>(label)] == 0) {
            continue;
        }

        FeatureRecord record;
        record.label = label;
        record.dataset_tag = "circuit_task";
        record.features.resize(static_cast<std::size_t>(config.dim));
        for (int q = 0; q < config.n_qubits; ++q) {
            record.features[static_cast<std::size_t>(q)] = u[static_cast<std::size_t>(q)];
        }
        for (int d = config.n_qubits; d < config.dim; ++d) {
            record.features[static_cast<std::size_t>(d)] = 0.3 * normal01(gen);
        }
        table.records.push_back(std::move(record));

        if (--remaining[static_cast<std::size_t>(label)] == 0) {
            --open_classes;
        }
    }
    return table;
}

} // namespace hqtn::data
