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
 * Mini-batch AdamW training with validation-based early stopping, exact and
 * finite-shot evaluation, and the three-way ablation protocol.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hqtn/dataset.hpp"
#include "hqtn/hybrid_model.hpp"
#include "hqtn/metrics.hpp"

namespace hqtn::data {

struct TrainConfig {
    int max_epochs = 50;
    int batch_size = 16;
    double lr_mps = 0.1;
    double lr_classic = 1e-3;
    double weight_decay = 0.01;
    int patience = 10;
    std::uint64_t seed = 42;
    bool monitor_accuracy = false; ///< early stopping watches val loss by default
};

struct TrainLog {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> train_acc;
    std::vector<double> val_acc;
    int best_epoch = -1; ///< 0-based index of the restored snapshot
    std::string stop_reason;
};

/// Loss/accuracy of the model over a record list, without gradients.
struct EvalStats {
    double loss = 0.0;
    double accuracy = 0.0;
};
EvalStats eval_stats(const model::HybridModel &model,
                     const std::vector<FeatureRecord> &records);

/// Trains in place. Each epoch shuffles deterministically, averages
/// gradients per batch, and steps AdamW; the best-validation snapshot is
/// restored before returning. Throws NumericError (with learning rates and
/// batch index) if a batch loss goes non-finite.
TrainLog train(model::HybridModel &model, const std::vector<FeatureRecord> &train_set,
               const std::vector<FeatureRecord> &val_set, const TrainConfig &config);

/// Exact statevector evaluation.
MetricsReport evaluate(const model::HybridModel &model,
                       const std::vector<FeatureRecord> &records);

struct ShotConfig {
    std::size_t shots = 1024;
    int n_seeds = 5;
    std::uint64_t base_seed = 42;
};

struct ShotEvalResult {
    std::vector<MetricsReport> per_seed;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    double min_accuracy = 0.0;
    double max_accuracy = 0.0;
};

/// Replaces the quantum features with per-utterance finite-shot estimates,
/// repeated for n_seeds independent evaluations.
ShotEvalResult evaluate_with_shots(const model::HybridModel &model,
                                   const std::vector<FeatureRecord> &records,
                                   const ShotConfig &config);

struct AblationRow {
    model::Mode mode;
    double test_accuracy = 0.0;
    model::ParamCount params;
};

struct AblationResult {
    std::vector<AblationRow> rows; ///< classical_only, quantum_only, hybrid
    std::uint64_t split_hash = 0;
};

/// Trains all three modes under one split/seed/budget and reports test
/// accuracy per mode.
AblationResult run_ablation(const std::vector<FeatureRecord> &records,
                            const SplitPlan &plan, const model::ModelConfig &model_config,
                            const TrainConfig &train_config);

/// Per-epoch CSV: epoch, train_loss, val_loss, train_acc, val_acc.
void export_curves(const TrainLog &log, const std::string &path);

} // namespace hqtn::data
