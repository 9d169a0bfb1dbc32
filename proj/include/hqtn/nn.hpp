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
 * Dense-network building blocks for the classical side of the hybrid model:
 * affine projection, encoder layers, softmax/cross-entropy, and an AdamW
 * optimizer with separate learning-rate groups for the quantum angles and
 * the classical parameters.
 */

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace hqtn::nn {

enum class Activation { None, Relu };

struct DenseLayer {
    Eigen::MatrixXd weight; ///< out x in
    Eigen::VectorXd bias;   ///< out
    Activation activation = Activation::None;

    [[nodiscard]] Eigen::Index out_dim() const { return weight.rows(); }
    [[nodiscard]] Eigen::Index in_dim() const { return weight.cols(); }
};

/// Learnable affine map from PCA space to the circuit's encoding angles,
/// u = P x + b.
struct Projection {
    Eigen::MatrixXd weight; ///< n x k
    Eigen::VectorXd bias;   ///< n
};

/// u = P x + b. Throws DimensionError on shape mismatch.
Eigen::VectorXd project(const Projection &projection, const Eigen::VectorXd &x);

/// Affine + activation for one layer.
Eigen::VectorXd dense_forward(const DenseLayer &layer, const Eigen::VectorXd &x);

/// Chains dense_forward across all layers.
Eigen::VectorXd encoder_forward(const std::vector<DenseLayer> &layers,
                                const Eigen::VectorXd &x);

/// Max-stabilized softmax; output sums to 1.
Eigen::VectorXd softmax(const Eigen::VectorXd &logits);

/// Stable log-softmax (logits minus logsumexp).
Eigen::VectorXd log_softmax(const Eigen::VectorXd &logits);

/// -log p[label] evaluated in the fused log-softmax form; never sees log(0).
double cross_entropy_from_logits(const Eigen::VectorXd &logits, int label);

/// -log(probs[label]) for an explicit probability vector.
double cross_entropy(const Eigen::VectorXd &probs, int label);

/// Parameter groups for the optimizer. Weight decay touches only classical
/// weight matrices; the quantum angles use their own learning rate.
enum class ParamGroup { QuantumTheta, ClassicalWeight, ClassicalBias };

struct TensorRef {
    double *data;
    std::size_t size;
    ParamGroup group;
};

struct ConstTensorRef {
    const double *data;
    std::size_t size;
};

struct AdamWConfig {
    double lr_classic = 1e-3;
    double lr_mps = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

/// Decoupled-weight-decay Adam over an ordered tensor list. The tensor list
/// must have the same layout on every call; moments are allocated on the
/// first step.
class AdamW {
  public:
    explicit AdamW(AdamWConfig config) : config_(config) {}

    void step(const std::vector<TensorRef> &params, const std::vector<ConstTensorRef> &grads);

    [[nodiscard]] std::int64_t step_count() const { return step_; }
    [[nodiscard]] const AdamWConfig &config() const { return config_; }

  private:
    AdamWConfig config_;
    std::int64_t step_ = 0;
    std::vector<std::vector<double>> first_moment_;
    std::vector<std::vector<double>> second_moment_;
};

} // namespace hqtn::nn
