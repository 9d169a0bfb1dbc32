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

// Acceptance suite. Each criterion runs at its pinned tolerance and prints
// one PASS/FAIL line; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hqtn/hybrid_model.hpp"
#include "hqtn/metrics.hpp"
#include "hqtn/mps_circuit.hpp"
#include "hqtn/pca.hpp"
#include "hqtn/rng.hpp"
#include "hqtn/state_vector.hpp"
#include "hqtn/synthetic.hpp"
#include "hqtn/trainer.hpp"
#include "oracles.hpp"

using namespace hqtn;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::vector<double> random_angles(std::size_t count, std::mt19937_64 &gen) {
    std::vector<double> v(count);
    for (double &x : v) {
        x = uniform_in(gen, -kPi, kPi);
    }
    return v;
}

// --------------------------------------------------------------------------
// 1. run_circuit vs dense 2^n x 2^n matrix products, 100 instances, <1e-12.

Outcome criterion_quantum_oracle() {
    const auto start = Clock::now();
    std::mt19937_64 gen(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const std::size_t layers = 1 + (trial / 3) % 2;
        const qsim::MpsCircuit circuit = qsim::build_mps_circuit(n, layers);
        const std::vector<double> u = random_angles(n, gen);
        const std::vector<double> theta = random_angles(circuit.num_params(), gen);

        const qsim::StateVector state = qsim::run_circuit(circuit, u, theta);
        const oracle::ComplexVector dense = oracle::run_circuit_dense(circuit, u, theta);
        for (std::size_t i = 0; i < state.size(); ++i) {
            worst = std::max(worst, std::abs(state.amplitude(i) -
                                             dense(static_cast<Eigen::Index>(i))));
        }
    }
    const double elapsed = seconds_since(start);
    return {worst < 1e-12 && elapsed < 10.0,
            fmt::format("max amplitude error {:.2e}, {:.2f} s", worst, elapsed)};
}

// --------------------------------------------------------------------------
// 2. Parameter-shift vs finite differences (<=1e-6 absolute, 100 instances)
//    and end-to-end hybrid gradients (<=1e-5 relative).

Outcome criterion_gradient_exactness() {
    const auto start = Clock::now();
    std::mt19937_64 gen(2002);
    double worst_jacobian = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const std::size_t layers = 1 + (trial / 3) % 2;
        const qsim::MpsCircuit circuit = qsim::build_mps_circuit(n, layers);
        std::vector<double> u = random_angles(n, gen);
        std::vector<double> theta = random_angles(circuit.num_params(), gen);

        const Eigen::MatrixXd jac = qsim::param_shift_jacobian(circuit, u, theta);
        for (std::size_t q = 0; q < n; ++q) {
            auto feature = [&]() { return qsim::quantum_features(circuit, u, theta)[q]; };
            for (std::size_t j = 0; j < circuit.num_params(); ++j) {
                const double numeric = oracle::finite_difference(feature, &theta[j]);
                worst_jacobian =
                    std::max(worst_jacobian,
                             std::abs(jac(static_cast<Eigen::Index>(q),
                                          static_cast<Eigen::Index>(j)) -
                                      numeric));
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double numeric = oracle::finite_difference(feature, &u[k]);
                worst_jacobian = std::max(
                    worst_jacobian,
                    std::abs(jac(static_cast<Eigen::Index>(q),
                                 static_cast<Eigen::Index>(circuit.num_params() + k)) -
                             numeric));
            }
        }
    }

    double worst_relative = 0.0;
    for (const int n : {2, 3, 4}) {
        model::ModelConfig config;
        config.input_dim = 6;
        config.n_classes = 3;
        config.n_qubits = n;
        config.n_layers = n == 4 ? 2 : 1;
        config.encoder_dims = {7, 5};
        config.mode = model::Mode::Hybrid;
        config.seed = 42 + static_cast<std::uint64_t>(n);
        model::HybridModel model(config);

        Eigen::VectorXd x(6);
        for (Eigen::Index i = 0; i < 6; ++i) {
            x(i) = uniform_in(gen, -1.0, 1.0);
        }
        const int label = 1;
        const model::ForwardCache cache = model.forward(x);
        model::HybridGrads grads = model.backward(cache, label);

        auto loss = [&]() {
            return nn::cross_entropy_from_logits(model.forward(x).logits, label);
        };
        const auto tensors = model.active_tensors();
        const auto grad_views = model.active_grad_tensors(grads);
        for (std::size_t t = 0; t < tensors.size(); ++t) {
            for (std::size_t i = 0; i < tensors[t].size; ++i) {
                const double numeric = oracle::finite_difference(loss, tensors[t].data + i);
                const double got = grad_views[t].data[i];
                worst_relative =
                    std::max(worst_relative,
                             std::abs(got - numeric) / std::max(1.0, std::abs(numeric)));
            }
        }
    }

    const double elapsed = seconds_since(start);
    return {worst_jacobian <= 1e-6 && worst_relative <= 1e-5 && elapsed < 60.0,
            fmt::format("jacobian error {:.2e}, end-to-end relative {:.2e}, {:.2f} s",
                        worst_jacobian, worst_relative, elapsed)};
}

// --------------------------------------------------------------------------
// 3. <Z> after RY(u) then RY(theta) equals cos(u + theta) on a 100-point grid.

Outcome criterion_single_qubit_law() {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double u = -kPi + 2.0 * kPi * i / 99.0;
        const double theta = 3.0 * std::sin(7.0 * i); // deterministic scatter
        qsim::StateVector state = qsim::zero_state(1);
        state.apply_ry(0, u);
        state.apply_ry(0, theta);
        worst = std::max(worst, std::abs(state.expect_z(0) - std::cos(u + theta)));
    }
    return {worst < 1e-12, fmt::format("max law error {:.2e}", worst)};
}

// --------------------------------------------------------------------------
// 4. Norm conservation over random 50-gate sequences; gate-then-inverse.

Outcome criterion_unitarity() {
    std::mt19937_64 gen(4004);
    double worst_norm = 0.0;
    double worst_restore = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 7;
        qsim::StateVector state = qsim::zero_state(n);

        struct Applied {
            int kind;
            std::size_t q;
            double angle;
        };
        std::vector<Applied> gates;
        for (int g = 0; g < 50; ++g) {
            const int kind = static_cast<int>(uniform_index(gen, 3));
            const std::size_t q = uniform_index(gen, n - 1);
            const double angle = uniform_in(gen, -kPi, kPi);
            gates.push_back({kind, q, angle});
            if (kind == 0) {
                state.apply_ry(q, angle);
            } else if (kind == 1) {
                state.apply_rz(q, angle);
            } else {
                state.apply_cnot(q, q + 1);
            }
        }
        worst_norm = std::max(worst_norm, std::abs(state.norm_squared() - 1.0));

        // Undo everything in reverse; CNOT is self-inverse.
        qsim::StateVector reference = qsim::zero_state(n);
        for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
            if (it->kind == 0) {
                state.apply_ry(it->q, -it->angle);
            } else if (it->kind == 1) {
                state.apply_rz(it->q, -it->angle);
            } else {
                state.apply_cnot(it->q, it->q + 1);
            }
        }
        for (std::size_t i = 0; i < state.size(); ++i) {
            worst_restore =
                std::max(worst_restore, std::abs(state.amplitude(i) - reference.amplitude(i)));
        }
    }
    return {worst_norm < 1e-12 && worst_restore < 1e-12,
            fmt::format("norm deviation {:.2e}, restore error {:.2e}", worst_norm,
                        worst_restore)};
}

// --------------------------------------------------------------------------
// 5. 1024-shot estimates on RY(pi/2)|0>: |error| <= 0.125 in >= 99% of 200
//    seeded trials.

Outcome criterion_shot_concentration() {
    qsim::StateVector state = qsim::zero_state(1);
    state.apply_ry(0, kPi / 2.0);
    int within = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::vector<double> z = qsim::sample_z_estimates(state, 1024, seed);
        if (std::abs(z[0]) <= 0.125) {
            ++within;
        }
    }
    return {within >= 198, fmt::format("{} of 200 trials within 4 sigma", within)};
}

// --------------------------------------------------------------------------
// 6. Gram-trick PCA vs direct dense eigendecomposition; no-leakage
//    bit-identity.

Outcome criterion_pca_oracle() {
    std::mt19937_64 gen(6006);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::Index n = 30 + 4 * trial; // <= 50
        const Eigen::Index dim = 12 + trial;   // <= 20
        Eigen::MatrixXd data(n, dim);
        for (Eigen::Index r = 0; r < n; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) {
                data(r, c) = normal01(gen) * (1.0 + 0.5 * static_cast<double>(c));
            }
        }
        const int k = 6;
        const pca::PcaModel model = pca::fit_pca(data, k);
        const Eigen::MatrixXd direct = oracle::pca_components_direct(data, k);
        worst = std::max(worst, (model.components - direct).cwiseAbs().maxCoeff());
    }

    // Leakage check: perturbing rows outside the training index set must
    // leave the fitted model bit-identical.
    Eigen::MatrixXd full(40, 10);
    std::mt19937_64 gen2(6007);
    for (Eigen::Index r = 0; r < 40; ++r) {
        for (Eigen::Index c = 0; c < 10; ++c) {
            full(r, c) = normal01(gen2);
        }
    }
    const Eigen::MatrixXd train_rows = full.topRows(25);
    const pca::PcaModel before = pca::fit_pca(train_rows, 4);
    full.bottomRows(15).array() += 123.0; // "test set" perturbation
    const pca::PcaModel after = pca::fit_pca(full.topRows(25), 4);
    const bool leak_free = before.mean == after.mean &&
                           before.components == after.components &&
                           before.explained_variance == after.explained_variance;

    return {worst < 1e-8 && leak_free,
            fmt::format("component error {:.2e}, leak-free {}", worst, leak_free)};
}

// --------------------------------------------------------------------------
// 7. Metrics vs the hand-counted 4-prediction case.

Outcome criterion_metrics_oracle() {
    const std::vector<int> truth = {1, 0, 0, 0};
    const std::vector<int> preds = {1, 1, 0, 0};
    const data::MetricsReport report = data::compute_metrics(truth, preds, 2);
    const bool ok = std::abs(report.precision[1] - 0.5) < 1e-15 &&
                    std::abs(report.recall[1] - 1.0) < 1e-15 &&
                    std::abs(report.f1[1] - 2.0 / 3.0) < 1e-15 &&
                    report.confusion[0][0] == 2 && report.confusion[0][1] == 1 &&
                    report.confusion[1][1] == 1 && std::abs(report.accuracy - 0.75) < 1e-15;
    return {ok, fmt::format("P={:.4f} R={:.4f} F1={:.4f}", report.precision[1],
                            report.recall[1], report.f1[1])};
}

// --------------------------------------------------------------------------
// 8. Blob training: 5 classes x 200, 32 dims, 5 sigma, seed 42, SAVEE-style
//    budget. Hybrid test accuracy >= 0.95 within 50 epochs and <= 5 minutes;
//    curves finite and trending down.

struct TrainedBlobs {
    model::HybridModel model;
    std::vector<data::FeatureRecord> test;
    double test_accuracy = 0.0;
};

Outcome criterion_synthetic_training(std::unique_ptr<TrainedBlobs> &out) {
    const auto start = Clock::now();
    const data::FeatureTable table = data::make_blobs(5, 200, 32, 5.0, 42);

    data::SplitConfig split_config;
    split_config.train_ratio = 0.6;
    split_config.val_ratio = 0.2;
    split_config.test_ratio = 0.2;
    split_config.seed = 42;
    const data::SplitPlan plan = data::make_split(table.records, split_config);

    model::ModelConfig model_config;
    model_config.input_dim = 32;
    model_config.n_classes = 5;
    model_config.n_qubits = 3;
    model_config.n_layers = 1;
    model_config.mode = model::Mode::Hybrid;
    model_config.seed = 42;
    model::HybridModel model(model_config);

    data::TrainConfig train_config;
    train_config.max_epochs = 50;
    train_config.batch_size = 8;
    train_config.lr_mps = 0.05;
    train_config.lr_classic = 1e-3;
    train_config.seed = 42;

    const std::vector<data::FeatureRecord> train_set = data::gather(table.records, plan.train);
    const std::vector<data::FeatureRecord> val_set = data::gather(table.records, plan.val);
    const std::vector<data::FeatureRecord> test_set = data::gather(table.records, plan.test);

    const data::TrainLog log = data::train(model, train_set, val_set, train_config);
    const data::MetricsReport report = data::evaluate(model, test_set);
    const double elapsed = seconds_since(start);

    bool curves_ok = !log.train_loss.empty();
    for (std::size_t e = 0; e < log.train_loss.size(); ++e) {
        if (!std::isfinite(log.train_loss[e]) || !std::isfinite(log.val_loss[e])) {
            curves_ok = false;
        }
    }
    if (curves_ok) {
        // Trending down without late-stage divergence: the final losses beat
        // the initial ones and no epoch blows past the starting level.
        curves_ok = log.train_loss.back() < log.train_loss.front() &&
                    log.val_loss.back() < log.val_loss.front();
        for (std::size_t e = 0; e < log.train_loss.size(); ++e) {
            if (log.train_loss[e] > 1.5 * log.train_loss.front() ||
                log.val_loss[e] > 1.5 * log.val_loss.front()) {
                curves_ok = false;
            }
        }
    }

    out = std::make_unique<TrainedBlobs>(
        TrainedBlobs{std::move(model), test_set, report.accuracy});
    return {report.accuracy >= 0.95 && elapsed <= 300.0 && curves_ok,
            fmt::format("test accuracy {:.4f} in {} epochs, {:.1f} s, curves ok {}",
                        report.accuracy, log.train_loss.size(), elapsed, curves_ok)};
}

// --------------------------------------------------------------------------
// 9. Ablation ordering on the circuit-labeled task.

Outcome criterion_ablation_ordering() {
    data::CircuitTaskConfig task_config;
    task_config.n_classes = 4;
    task_config.per_class = 150;
    task_config.dim = 32;
    task_config.seed = 42;
    const data::FeatureTable table = data::make_circuit_task(task_config);

    data::SplitConfig split_config;
    split_config.train_ratio = 0.6;
    split_config.val_ratio = 0.2;
    split_config.test_ratio = 0.2;
    split_config.seed = 42;
    const data::SplitPlan plan = data::make_split(table.records, split_config);

    model::ModelConfig model_config;
    model_config.input_dim = 32;
    model_config.n_classes = 4;
    model_config.n_qubits = 3;
    model_config.n_layers = 1;
    model_config.seed = 42;

    data::TrainConfig train_config;
    train_config.max_epochs = 60;
    train_config.batch_size = 16;
    train_config.lr_mps = 0.1;
    train_config.lr_classic = 0.005;
    train_config.seed = 42;

    const data::AblationResult result =
        data::run_ablation(table.records, plan, model_config, train_config);
    const double classical = result.rows[0].test_accuracy;
    const double quantum = result.rows[1].test_accuracy;
    const double hybrid = result.rows[2].test_accuracy;
    const double chance = 1.0 / 4.0;

    const bool ok = hybrid >= quantum && hybrid >= classical && quantum >= chance + 0.15;
    return {ok, fmt::format("classical {:.4f}, quantum {:.4f}, hybrid {:.4f}, chance {:.2f}",
                            classical, quantum, hybrid, chance)};
}

// --------------------------------------------------------------------------
// 10. Shot-noise stability on criterion 8's trained model.

Outcome criterion_shot_stability(const TrainedBlobs &trained) {
    data::ShotConfig shots;
    shots.shots = 1024;
    shots.n_seeds = 5;
    shots.base_seed = 42;
    const data::ShotEvalResult result =
        data::evaluate_with_shots(trained.model, trained.test, shots);
    const double gap = std::abs(result.mean_accuracy - trained.test_accuracy);
    return {gap <= 0.03,
            fmt::format("exact {:.4f}, shot mean {:.4f} +- {:.4f} (range {:.4f}-{:.4f}), "
                        "gap {:.4f}",
                        trained.test_accuracy, result.mean_accuracy, result.std_accuracy,
                        result.min_accuracy, result.max_accuracy, gap)};
}

} // namespace

int main() {
    int failures = 0;
    std::unique_ptr<TrainedBlobs> trained;

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"quantum oracle equivalence", criterion_quantum_oracle},
        {"gradient exactness", criterion_gradient_exactness},
        {"analytic single-qubit law", criterion_single_qubit_law},
        {"normalization and unitarity", criterion_unitarity},
        {"shot-estimator concentration", criterion_shot_concentration},
        {"pca oracle and leakage", criterion_pca_oracle},
        {"metrics oracle", criterion_metrics_oracle},
        {"end-to-end synthetic training",
         [&trained]() { return criterion_synthetic_training(trained); }},
        {"ablation ordering", criterion_ablation_ordering},
        {"shot-noise stability",
         [&trained]() -> Outcome {
             if (!trained) {
                 return {false, "criterion 8 did not produce a model"};
             }
             return criterion_shot_stability(*trained);
         }},
    };

    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome{false, "exception"};
        try {
            outcome = criteria[i].second();
        } catch (const std::exception &e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) {
            ++failures;
        }
        fmt::print("[{}] criterion {}: {} ({})\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                   criteria[i].first, outcome.detail);
    }

    fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures;
}
