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

#include "hqtn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "hqtn/errors.hpp"
#include "hqtn/rng.hpp"

namespace hqtn::data {

namespace {

Eigen::VectorXd to_vector(const std::vector<double> &values) {
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

int argmax(const Eigen::VectorXd &v) {
    Eigen::Index best = 0;
    v.maxCoeff(&best);
    return static_cast<int>(best);
}

} // namespace

EvalStats eval_stats(const model::HybridModel &model,
                     const std::vector<FeatureRecord> &records) {
    EvalStats stats;
    if (records.empty()) {
        return stats;
    }
    std::size_t correct = 0;
    for (const FeatureRecord &record : records) {
        const model::ForwardCache cache = model.forward(to_vector(record.features));
        stats.loss += nn::cross_entropy_from_logits(cache.logits, record.label);
        if (argmax(cache.probs) == record.label) {
            ++correct;
        }
    }
    stats.loss /= static_cast<double>(records.size());
    stats.accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
    return stats;
}

TrainLog train(model::HybridModel &model, const std::vector<FeatureRecord> &train_set,
               const std::vector<FeatureRecord> &val_set, const TrainConfig &config) {
    if (train_set.empty() || val_set.empty()) {
        throw ArgumentError("train and validation splits must be nonempty");
    }
    if (config.batch_size < 1 || config.max_epochs < 1) {
        throw ArgumentError("batch size and epoch budget must be positive");
    }

    nn::AdamWConfig opt_config;
    opt_config.lr_mps = config.lr_mps;
    opt_config.lr_classic = config.lr_classic;
    opt_config.weight_decay = config.weight_decay;
    nn::AdamW optimizer(opt_config);

    TrainLog log;
    model::HybridParams best_params = model.params();
    double best_metric = std::numeric_limits<double>::infinity();
    int best_epoch = -1;
    int epochs_without_improvement = 0;

    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        std::mt19937_64 gen(derive_seed(config.seed, static_cast<std::uint64_t>(epoch)));
        shuffle_indices(order, gen);

        double epoch_loss = 0.0;
        std::size_t epoch_correct = 0;
        const std::size_t n_batches =
            (train_set.size() + static_cast<std::size_t>(config.batch_size) - 1) /
            static_cast<std::size_t>(config.batch_size);

        for (std::size_t b = 0; b < n_batches; ++b) {
            const std::size_t begin = b * static_cast<std::size_t>(config.batch_size);
            const std::size_t end =
                std::min(begin + static_cast<std::size_t>(config.batch_size), train_set.size());

            model::HybridGrads batch_grads = model.zero_grads();
            double batch_loss = 0.0;
            for (std::size_t i = begin; i < end; ++i) {
                const FeatureRecord &record = train_set[order[i]];
                const model::ForwardCache cache = model.forward(to_vector(record.features));
                batch_loss += nn::cross_entropy_from_logits(cache.logits, record.label);
                if (argmax(cache.probs) == record.label) {
                    ++epoch_correct;
                }
                batch_grads.add_scaled(model.backward(cache, record.label), 1.0);
            }
            const double scale = 1.0 / static_cast<double>(end - begin);
            batch_grads.scale(scale);
            batch_loss *= scale;
            epoch_loss += batch_loss * static_cast<double>(end - begin);

            if (!std::isfinite(batch_loss)) {
                throw NumericError(fmt::format(
                    "non-finite loss at epoch {} batch {} (lr_mps={}, lr_classic={})", epoch,
                    b, config.lr_mps, config.lr_classic));
            }

            const auto params = model.active_tensors();
            const auto grads = model.active_grad_tensors(batch_grads);
            optimizer.step(params, grads);
        }

        log.train_loss.push_back(epoch_loss / static_cast<double>(train_set.size()));
        log.train_acc.push_back(static_cast<double>(epoch_correct) /
                                static_cast<double>(train_set.size()));

        const EvalStats val = eval_stats(model, val_set);
        log.val_loss.push_back(val.loss);
        log.val_acc.push_back(val.accuracy);

        const double monitored = config.monitor_accuracy ? -val.accuracy : val.loss;
        if (monitored < best_metric) {
            best_metric = monitored;
            best_params = model.params();
            best_epoch = epoch;
            epochs_without_improvement = 0;
        } else {
            ++epochs_without_improvement;
            if (config.patience > 0 && epochs_without_improvement >= config.patience) {
                log.stop_reason = fmt::format("early_stopping after epoch {}", epoch + 1);
                break;
            }
        }
    }
    if (log.stop_reason.empty()) {
        log.stop_reason = "max_epochs";
    }
    log.best_epoch = best_epoch;
    model.params() = best_params;
    return log;
}

MetricsReport evaluate(const model::HybridModel &model,
                       const std::vector<FeatureRecord> &records) {
    if (records.empty()) {
        throw ArgumentError("evaluation set is empty");
    }
    std::vector<int> y_true;
    std::vector<int> y_pred;
    y_true.reserve(records.size());
    y_pred.reserve(records.size());
    for (const FeatureRecord &record : records) {
        const model::ForwardCache cache = model.forward(to_vector(record.features));
        y_true.push_back(record.label);
        y_pred.push_back(argmax(cache.probs));
    }
    return compute_metrics(y_true, y_pred, model.config().n_classes);
}

ShotEvalResult evaluate_with_shots(const model::HybridModel &model,
                                   const std::vector<FeatureRecord> &records,
                                   const ShotConfig &config) {
    if (records.empty()) {
        throw ArgumentError("evaluation set is empty");
    }
    if (config.shots == 0) {
        throw ArgumentError("shots must be >= 1");
    }
    if (config.n_seeds < 1) {
        throw ArgumentError("need at least one shot seed");
    }

    ShotEvalResult result;
    for (int run = 0; run < config.n_seeds; ++run) {
        std::vector<int> y_true;
        std::vector<int> y_pred;
        y_true.reserve(records.size());
        y_pred.reserve(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) {
            const std::uint64_t seed =
                derive_seed(config.base_seed, static_cast<std::uint64_t>(run), i);
            const model::ForwardCache cache =
                model.forward_sampled(to_vector(records[i].features), config.shots, seed);
            y_true.push_back(records[i].label);
            y_pred.push_back(argmax(cache.probs));
        }
        result.per_seed.push_back(compute_metrics(y_true, y_pred, model.config().n_classes));
    }

    double mean = 0.0;
    result.min_accuracy = result.per_seed.front().accuracy;
    result.max_accuracy = result.per_seed.front().accuracy;
    for (const MetricsReport &report : result.per_seed) {
        mean += report.accuracy;
        result.min_accuracy = std::min(result.min_accuracy, report.accuracy);
        result.max_accuracy = std::max(result.max_accuracy, report.accuracy);
    }
    mean /= static_cast<double>(result.per_seed.size());
    double var = 0.0;
    for (const MetricsReport &report : result.per_seed) {
        var += (report.accuracy - mean) * (report.accuracy - mean);
    }
    var /= static_cast<double>(result.per_seed.size());
    result.mean_accuracy = mean;
    result.std_accuracy = std::sqrt(var);
    return result;
}

AblationResult run_ablation(const std::vector<FeatureRecord> &records,
                            const SplitPlan &plan, const model::ModelConfig &model_config,
                            const TrainConfig &train_config) {
    const std::vector<FeatureRecord> train_set = gather(records, plan.train);
    const std::vector<FeatureRecord> val_set = gather(records, plan.val);
    const std::vector<FeatureRecord> test_set = gather(records, plan.test);

    AblationResult result;
    result.split_hash = split_hash(plan);
    for (const model::Mode mode :
         {model::Mode::ClassicalOnly, model::Mode::QuantumOnly, model::Mode::Hybrid}) {
        model::ModelConfig config = model_config;
        config.mode = mode;
        model::HybridModel model(config);
        train(model, train_set, val_set, train_config);
        const MetricsReport report = evaluate(model, test_set);
        result.rows.push_back({mode, report.accuracy, model.count_params()});
    }
    return result;
}

void export_curves(const TrainLog &log, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open curve file for writing: " + path);
    }
    out << "epoch,train_loss,val_loss,train_acc,val_acc\n";
    for (std::size_t e = 0; e < log.train_loss.size(); ++e) {
        out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", e + 1, log.train_loss[e],
                           log.val_loss[e], log.train_acc[e], log.val_acc[e]);
    }
    if (!out) {
        throw IoError("failed writing curve file: " + path);
    }
}

} // namespace hqtn::data
