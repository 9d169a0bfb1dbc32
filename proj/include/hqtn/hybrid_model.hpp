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
 * The hybrid predictor: a classical encoder and an MPS quantum feature
 * branch fused by concatenation into a softmax head. Gradients flow through
 * the circuit exactly via the parameter-shift rule, including into the
 * affine projection feeding the encoding angles. Ablation modes drop one
 * branch while keeping the rest of the pipeline identical.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hqtn/mps_circuit.hpp"
#include "hqtn/nn.hpp"

namespace hqtn::model {

enum class Mode { Hybrid, ClassicalOnly, QuantumOnly };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string &name);

struct ModelConfig {
    int input_dim = 32; ///< PCA feature dimension k
    int n_classes = 0;
    int n_qubits = 3;
    int n_layers = 1;
    std::vector<int> encoder_dims = {64, 16}; ///< hidden widths; last is d_c
    Mode mode = Mode::Hybrid;
    std::uint64_t seed = 42;
};

/// All trainable parameters. Every mode carries the full set so checkpoints
/// are mode-independent; only the active groups are trained and counted.
struct HybridParams {
    nn::Projection projection;
    std::vector<double> theta; ///< 2 * n_qubits * n_layers circuit angles
    std::vector<nn::DenseLayer> encoder;
    nn::DenseLayer head;
};

/// Gradients with the same shapes as HybridParams.
struct HybridGrads {
    Eigen::MatrixXd projection_weight;
    Eigen::VectorXd projection_bias;
    Eigen::VectorXd theta;
    std::vector<Eigen::MatrixXd> encoder_weight;
    std::vector<Eigen::VectorXd> encoder_bias;
    Eigen::MatrixXd head_weight;
    Eigen::VectorXd head_bias;

    void add_scaled(const HybridGrads &other, double scale);
    void scale(double factor);
};

/// Everything backward needs from one forward pass.
struct ForwardCache {
    Eigen::VectorXd input;
    std::vector<Eigen::VectorXd> encoder_pre;  ///< pre-activation per layer
    std::vector<Eigen::VectorXd> encoder_post; ///< post-activation per layer
    Eigen::VectorXd u;   ///< encoding angles (quantum branch only)
    Eigen::VectorXd z_q; ///< quantum features (quantum branch only)
    Eigen::VectorXd fused;
    Eigen::VectorXd logits;
    Eigen::VectorXd probs;
};

struct ParamCount {
    std::size_t quantum = 0;
    std::size_t classical = 0;
    [[nodiscard]] std::size_t total() const { return quantum + classical; }
};

class HybridModel {
  public:
    /// Builds the circuit and initializes all parameter groups from the
    /// config seed: weights/biases uniform on +-sqrt(1/fan_in), circuit
    /// angles uniform on [-pi/10, pi/10].
    explicit HybridModel(ModelConfig config);

    /// Wraps existing parameters (checkpoint restore). Shapes must match
    /// the config.
    HybridModel(ModelConfig config, HybridParams params);

    [[nodiscard]] const ModelConfig &config() const { return config_; }
    [[nodiscard]] const qsim::MpsCircuit &circuit() const { return circuit_; }
    [[nodiscard]] const HybridParams &params() const { return params_; }
    [[nodiscard]] HybridParams &params() { return params_; }

    /// Full forward pass; cache.probs holds the class distribution.
    [[nodiscard]] ForwardCache forward(const Eigen::VectorXd &x) const;

    /// Forward pass with the quantum features replaced by finite-shot
    /// estimates; evaluation only, classical branch unchanged.
    [[nodiscard]] ForwardCache forward_sampled(const Eigen::VectorXd &x, std::size_t shots,
                                               std::uint64_t seed) const;

    /// Cross-entropy gradients for every active parameter group.
    [[nodiscard]] HybridGrads backward(const ForwardCache &cache, int label) const;

    /// Backprop from an explicit upstream logit gradient.
    [[nodiscard]] HybridGrads backward_from_dlogits(const ForwardCache &cache,
                                                    const Eigen::VectorXd &dlogits) const;

    /// Zero-filled gradients shaped like the parameters.
    [[nodiscard]] HybridGrads zero_grads() const;

    /// Trainable parameter count of the active groups for the current mode.
    [[nodiscard]] ParamCount count_params() const;

    /// Optimizer views over the active parameter groups, in a fixed order.
    [[nodiscard]] std::vector<nn::TensorRef> active_tensors();
    [[nodiscard]] std::vector<nn::ConstTensorRef> active_grad_tensors(HybridGrads &grads) const;

    [[nodiscard]] bool classical_branch_active() const {
        return config_.mode != Mode::QuantumOnly;
    }
    [[nodiscard]] bool quantum_branch_active() const {
        return config_.mode != Mode::ClassicalOnly;
    }

    /// Fused feature width feeding the head (d_c + n, d_c, or n by mode).
    [[nodiscard]] int fused_dim() const;

  private:
    void validate_shapes() const;

    ModelConfig config_;
    qsim::MpsCircuit circuit_;
    HybridParams params_;
};

} // namespace hqtn::model
