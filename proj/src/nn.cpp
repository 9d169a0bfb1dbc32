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

#include "hqtn/nn.hpp"

#include <cmath>

#include "hqtn/errors.hpp"

namespace hqtn::nn {

Eigen::VectorXd project(const Projection &projection, const Eigen::VectorXd &x) {
    if (x.size() != projection.weight.cols()) {
        throw DimensionError("projection input length mismatch");
    }
    return projection.weight * x + projection.bias;
}

Eigen::VectorXd dense_forward(const DenseLayer &layer, const Eigen::VectorXd &x) {
    if (x.size() != layer.in_dim()) {
        throw DimensionError("dense layer input length mismatch");
    }
    Eigen::VectorXd y = layer.weight * x + layer.bias;
    if (layer.activation == Activation::Relu) {
        y = y.cwiseMax(0.0);
    }
    return y;
}

Eigen::VectorXd encoder_forward(const std::vector<DenseLayer> &layers,
                                const Eigen::VectorXd &x) {
    Eigen::VectorXd h = x;
    for (const DenseLayer &layer : layers) {
        h = dense_forward(layer, h);
    }
    return h;
}

Eigen::VectorXd softmax(const Eigen::VectorXd &logits) {
    const double peak = logits.maxCoeff();
    Eigen::VectorXd exps = (logits.array() - peak).exp();
    return exps / exps.sum();
}

Eigen::VectorXd log_softmax(const Eigen::VectorXd &logits) {
    const double peak = logits.maxCoeff();
    const double lse = peak + std::log((logits.array() - peak).exp().sum());
    return logits.array() - lse;
}

double cross_entropy_from_logits(const Eigen::VectorXd &logits, int label) {
    if (label < 0 || label >= logits.size()) {
        throw ArgumentError("label out of range");
    }
    return -log_softmax(logits)(label);
}

double cross_entropy(const Eigen::VectorXd &probs, int label) {
    if (label < 0 || label >= probs.size()) {
        throw ArgumentError("label out of range");
    }
    return -std::log(std::max(probs(label), 1e-300));
}

void AdamW::step(const std::vector<TensorRef> &params,
                 const std::vector<ConstTensorRef> &grads) {
    if (params.size() != grads.size()) {
        throw DimensionError("parameter/gradient tensor counts differ");
    }
    if (first_moment_.empty()) {
        first_moment_.resize(params.size());
        second_moment_.resize(params.size());
        for (std::size_t t = 0; t < params.size(); ++t) {
            first_moment_[t].assign(params[t].size, 0.0);
            second_moment_[t].assign(params[t].size, 0.0);
        }
    }
    if (first_moment_.size() != params.size()) {
        throw DimensionError("tensor layout changed between optimizer steps");
    }

    ++step_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));

    for (std::size_t t = 0; t < params.size(); ++t) {
        const TensorRef &p = params[t];
        const ConstTensorRef &g = grads[t];
        if (p.size != g.size || p.size != first_moment_[t].size()) {
            throw DimensionError("tensor size mismatch in optimizer step");
        }
        const double lr =
            p.group == ParamGroup::QuantumTheta ? config_.lr_mps : config_.lr_classic;
        const bool decay = p.group == ParamGroup::ClassicalWeight;

        double *m = first_moment_[t].data();
        double *v = second_moment_[t].data();
        for (std::size_t i = 0; i < p.size; ++i) {
            m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g.data[i];
            v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g.data[i] * g.data[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            double update = lr * m_hat / (std::sqrt(v_hat) + config_.eps);
            if (decay) {
                update += lr * config_.weight_decay * p.data[i];
            }
            p.data[i] -= update;
        }
    }
}

} // namespace hqtn::nn
