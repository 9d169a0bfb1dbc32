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

#include "hqtn/hybrid_model.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hqtn/errors.hpp"
#include "hqtn/rng.hpp"

namespace hqtn::model {

std::string to_string(Mode mode) {
    switch (mode) {
    case Mode::Hybrid:
        return "hybrid";
    case Mode::ClassicalOnly:
        return "classical_only";
    case Mode::QuantumOnly:
        return "quantum_only";
    }
    return "hybrid";
}

Mode mode_from_string(const std::string &name) {
    if (name == "hybrid") {
        return Mode::Hybrid;
    }
    if (name == "classical_only") {
        return Mode::ClassicalOnly;
    }
    if (name == "quantum_only") {
        return Mode::QuantumOnly;
    }
    throw ArgumentError("unknown mode '" + name + "'");
}

namespace {

void fill_uniform(Eigen::Ref<Eigen::MatrixXd> m, std::mt19937_64 &gen, double bound) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = uniform_in(gen, -bound, bound);
        }
    }
}

nn::DenseLayer make_layer(int out, int in, nn::Activation act, std::mt19937_64 &gen) {
    nn::DenseLayer layer;
    layer.weight.resize(out, in);
    layer.bias.resize(out);
    layer.activation = act;
    const double bound = std::sqrt(1.0 / static_cast<double>(in));
    fill_uniform(layer.weight, gen, bound);
    fill_uniform(layer.bias, gen, bound);
    return layer;
}

} // namespace

HybridModel::HybridModel(ModelConfig config)
    : config_(std::move(config)),
      circuit_(qsim::build_mps_circuit(static_cast<std::size_t>(config_.n_qubits),
                                       static_cast<std::size_t>(config_.n_layers))) {
    if (config_.n_classes < 2) {
        throw ArgumentError("model needs at least 2 classes");
    }
    std::mt19937_64 gen(config_.seed);

    const int n = config_.n_qubits;
    const int k = config_.input_dim;
    params_.projection.weight.resize(n, k);
    params_.projection.bias.resize(n);
    const double proj_bound = std::sqrt(1.0 / static_cast<double>(k));
    fill_uniform(params_.projection.weight, gen, proj_bound);
    fill_uniform(params_.projection.bias, gen, proj_bound);

    params_.theta.resize(circuit_.num_params());
    for (double &angle : params_.theta) {
        angle = uniform_in(gen, -std::numbers::pi / 10.0, std::numbers::pi / 10.0);
    }

    int in_dim = k;
    for (const int width : config_.encoder_dims) {
        params_.encoder.push_back(make_layer(width, in_dim, nn::Activation::Relu, gen));
        in_dim = width;
    }

    params_.head = make_layer(config_.n_classes, fused_dim(), nn::Activation::None, gen);
}

HybridModel::HybridModel(ModelConfig config, HybridParams params)
    : config_(std::move(config)),
      circuit_(qsim::build_mps_circuit(static_cast<std::size_t>(config_.n_qubits),
                                       static_cast<std::size_t>(config_.n_layers))),
      params_(std::move(params)) {
    validate_shapes();
}

int HybridModel::fused_dim() const {
    const int d_c = config_.encoder_dims.empty() ? config_.input_dim
                                                 : config_.encoder_dims.back();
    switch (config_.mode) {
    case Mode::Hybrid:
        return d_c + config_.n_qubits;
    case Mode::ClassicalOnly:
        return d_c;
    case Mode::QuantumOnly:
        return config_.n_qubits;
    }
    return d_c + config_.n_qubits;
}

void HybridModel::validate_shapes() const {
    if (params_.projection.weight.rows() != config_.n_qubits ||
        params_.projection.weight.cols() != config_.input_dim ||
        params_.projection.bias.size() != config_.n_qubits) {
        throw DimensionError("projection shape does not match config");
    }
    if (params_.theta.size() != circuit_.num_params()) {
        throw DimensionError("theta length does not match circuit");
    }
    if (params_.encoder.size() != config_.encoder_dims.size()) {
        throw DimensionError("encoder depth does not match config");
    }
    int in_dim = config_.input_dim;
    for (std::size_t i = 0; i < params_.encoder.size(); ++i) {
        if (params_.encoder[i].in_dim() != in_dim ||
            params_.encoder[i].out_dim() != config_.encoder_dims[i]) {
            throw DimensionError("encoder layer shape does not match config");
        }
        in_dim = config_.encoder_dims[i];
    }
    if (params_.head.in_dim() != fused_dim() || params_.head.out_dim() != config_.n_classes) {
        throw DimensionError("head shape does not match mode/config");
    }
}

ForwardCache HybridModel::forward(const Eigen::VectorXd &x) const {
    if (x.size() != config_.input_dim) {
        throw DimensionError("input feature length mismatch");
    }
    ForwardCache cache;
    cache.input = x;

    if (classical_branch_active()) {
        Eigen::VectorXd h = x;
        for (const nn::DenseLayer &layer : params_.encoder) {
            Eigen::VectorXd pre = layer.weight * h + layer.bias;
            cache.encoder_pre.push_back(pre);
            h = layer.activation == nn::Activation::Relu ? pre.cwiseMax(0.0).eval() : pre;
            cache.encoder_post.push_back(h);
        }
    }

    if (quantum_branch_active()) {
        cache.u = nn::project(params_.projection, x);
        const std::vector<double> z = qsim::quantum_features(
            circuit_, std::span<const double>(cache.u.data(), cache.u.size()), params_.theta);
        cache.z_q = Eigen::Map<const Eigen::VectorXd>(z.data(),
                                                      static_cast<Eigen::Index>(z.size()));
    }

    const Eigen::VectorXd &z_c =
        cache.encoder_post.empty() ? cache.input : cache.encoder_post.back();
    switch (config_.mode) {
    case Mode::Hybrid: {
        cache.fused.resize(z_c.size() + cache.z_q.size());
        cache.fused << z_c, cache.z_q;
        break;
    }
    case Mode::ClassicalOnly:
        cache.fused = z_c;
        break;
    case Mode::QuantumOnly:
        cache.fused = cache.z_q;
        break;
    }

    cache.logits = params_.head.weight * cache.fused + params_.head.bias;
    cache.probs = nn::softmax(cache.logits);
    return cache;
}

ForwardCache HybridModel::forward_sampled(const Eigen::VectorXd &x, std::size_t shots,
                                          std::uint64_t seed) const {
    if (!quantum_branch_active()) {
        return forward(x);
    }
    ForwardCache cache = forward(x);
    const qsim::StateVector state = qsim::run_circuit(
        circuit_, std::span<const double>(cache.u.data(), cache.u.size()), params_.theta);
    const std::vector<double> z = qsim::sample_z_estimates(state, shots, seed);
    cache.z_q = Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));

    const Eigen::VectorXd &z_c =
        cache.encoder_post.empty() ? cache.input : cache.encoder_post.back();
    if (config_.mode == Mode::Hybrid) {
        cache.fused << z_c, cache.z_q;
    } else {
        cache.fused = cache.z_q;
    }
    cache.logits = params_.head.weight * cache.fused + params_.head.bias;
    cache.probs = nn::softmax(cache.logits);
    return cache;
}

HybridGrads HybridModel::zero_grads() const {
    HybridGrads g;
    g.projection_weight = Eigen::MatrixXd::Zero(params_.projection.weight.rows(),
                                                params_.projection.weight.cols());
    g.projection_bias = Eigen::VectorXd::Zero(params_.projection.bias.size());
    g.theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params_.theta.size()));
    for (const nn::DenseLayer &layer : params_.encoder) {
        g.encoder_weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
        g.encoder_bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
    }
    g.head_weight = Eigen::MatrixXd::Zero(params_.head.weight.rows(), params_.head.weight.cols());
    g.head_bias = Eigen::VectorXd::Zero(params_.head.bias.size());
    return g;
}

HybridGrads HybridModel::backward(const ForwardCache &cache, int label) const {
    if (label < 0 || label >= config_.n_classes) {
        throw ArgumentError("label out of range");
    }
    Eigen::VectorXd dlogits = cache.probs;
    dlogits(label) -= 1.0;
    return backward_from_dlogits(cache, dlogits);
}

HybridGrads HybridModel::backward_from_dlogits(const ForwardCache &cache,
                                               const Eigen::VectorXd &dlogits) const {
    if (dlogits.size() != config_.n_classes) {
        throw DimensionError("upstream gradient length mismatch");
    }
    HybridGrads grads = zero_grads();

    grads.head_weight = dlogits * cache.fused.transpose();
    grads.head_bias = dlogits;
    const Eigen::VectorXd dfused = params_.head.weight.transpose() * dlogits;

    Eigen::VectorXd dz_c;
    Eigen::VectorXd dz_q;
    switch (config_.mode) {
    case Mode::Hybrid:
        dz_c = dfused.head(dfused.size() - config_.n_qubits);
        dz_q = dfused.tail(config_.n_qubits);
        break;
    case Mode::ClassicalOnly:
        dz_c = dfused;
        break;
    case Mode::QuantumOnly:
        dz_q = dfused;
        break;
    }

    if (classical_branch_active() && !params_.encoder.empty()) {
        Eigen::VectorXd dpost = dz_c;
        for (int i = static_cast<int>(params_.encoder.size()) - 1; i >= 0; --i) {
            const nn::DenseLayer &layer = params_.encoder[static_cast<std::size_t>(i)];
            Eigen::VectorXd dpre = dpost;
            if (layer.activation == nn::Activation::Relu) {
                const Eigen::VectorXd &pre = cache.encoder_pre[static_cast<std::size_t>(i)];
                for (Eigen::Index r = 0; r < dpre.size(); ++r) {
                    if (pre(r) <= 0.0) {
                        dpre(r) = 0.0;
                    }
                }
            }
            const Eigen::VectorXd &layer_in =
                i == 0 ? cache.input : cache.encoder_post[static_cast<std::size_t>(i - 1)];
            grads.encoder_weight[static_cast<std::size_t>(i)] = dpre * layer_in.transpose();
            grads.encoder_bias[static_cast<std::size_t>(i)] = dpre;
            dpost = layer.weight.transpose() * dpre;
        }
    }

    if (quantum_branch_active()) {
        const Eigen::MatrixXd jacobian = qsim::param_shift_jacobian(
            circuit_, std::span<const double>(cache.u.data(), cache.u.size()), params_.theta);
        const auto n_theta = static_cast<Eigen::Index>(circuit_.num_params());
        grads.theta = jacobian.leftCols(n_theta).transpose() * dz_q;
        const Eigen::VectorXd du = jacobian.rightCols(config_.n_qubits).transpose() * dz_q;
        grads.projection_weight = du * cache.input.transpose();
        grads.projection_bias = du;
    }
    return grads;
}

ParamCount HybridModel::count_params() const {
    ParamCount count;
    if (quantum_branch_active()) {
        count.quantum = params_.theta.size();
        count.classical += static_cast<std::size_t>(params_.projection.weight.size()) +
                           static_cast<std::size_t>(params_.projection.bias.size());
    }
    if (classical_branch_active()) {
        for (const nn::DenseLayer &layer : params_.encoder) {
            count.classical += static_cast<std::size_t>(layer.weight.size()) +
                               static_cast<std::size_t>(layer.bias.size());
        }
    }
    count.classical += static_cast<std::size_t>(params_.head.weight.size()) +
                       static_cast<std::size_t>(params_.head.bias.size());
    return count;
}

std::vector<nn::TensorRef> HybridModel::active_tensors() {
    std::vector<nn::TensorRef> refs;
    if (quantum_branch_active()) {
        refs.push_back({params_.projection.weight.data(),
                        static_cast<std::size_t>(params_.projection.weight.size()),
                        nn::ParamGroup::ClassicalWeight});
        refs.push_back({params_.projection.bias.data(),
                        static_cast<std::size_t>(params_.projection.bias.size()),
                        nn::ParamGroup::ClassicalBias});
        refs.push_back({params_.theta.data(), params_.theta.size(),
                        nn::ParamGroup::QuantumTheta});
    }
    if (classical_branch_active()) {
        for (nn::DenseLayer &layer : params_.encoder) {
            refs.push_back({layer.weight.data(), static_cast<std::size_t>(layer.weight.size()),
                            nn::ParamGroup::ClassicalWeight});
            refs.push_back({layer.bias.data(), static_cast<std::size_t>(layer.bias.size()),
                            nn::ParamGroup::ClassicalBias});
        }
    }
    refs.push_back({params_.head.weight.data(),
                    static_cast<std::size_t>(params_.head.weight.size()),
                    nn::ParamGroup::ClassicalWeight});
    refs.push_back({params_.head.bias.data(),
                    static_cast<std::size_t>(params_.head.bias.size()),
                    nn::ParamGroup::ClassicalBias});
    return refs;
}

std::vector<nn::ConstTensorRef>
HybridModel::active_grad_tensors(HybridGrads &grads) const {
    std::vector<nn::ConstTensorRef> refs;
    if (quantum_branch_active()) {
        refs.push_back({grads.projection_weight.data(),
                        static_cast<std::size_t>(grads.projection_weight.size())});
        refs.push_back({grads.projection_bias.data(),
                        static_cast<std::size_t>(grads.projection_bias.size())});
        refs.push_back({grads.theta.data(), static_cast<std::size_t>(grads.theta.size())});
    }
    if (classical_branch_active()) {
        for (std::size_t i = 0; i < grads.encoder_weight.size(); ++i) {
            refs.push_back({grads.encoder_weight[i].data(),
                            static_cast<std::size_t>(grads.encoder_weight[i].size())});
            refs.push_back({grads.encoder_bias[i].data(),
                            static_cast<std::size_t>(grads.encoder_bias[i].size())});
        }
    }
    refs.push_back({grads.head_weight.data(), static_cast<std::size_t>(grads.head_weight.size())});
    refs.push_back({grads.head_bias.data(), static_cast<std::size_t>(grads.head_bias.size())});
    return refs;
}

void HybridGrads::add_scaled(const HybridGrads &other, double scale) {
    projection_weight += scale * other.projection_weight;
    projection_bias += scale * other.projection_bias;
    theta += scale * other.theta;
    for (std::size_t i = 0; i < encoder_weight.size(); ++i) {
        encoder_weight[i] += scale * other.encoder_weight[i];
        encoder_bias[i] += scale * other.encoder_bias[i];
    }
    head_weight += scale * other.head_weight;
    head_bias += scale * other.head_bias;
}

void HybridGrads::scale(double factor) {
    projection_weight *= factor;
    projection_bias *= factor;
    theta *= factor;
    for (std::size_t i = 0; i < encoder_weight.size(); ++i) {
        encoder_weight[i] *= factor;
        encoder_bias[i] *= factor;
    }
    head_weight *= factor;
    head_bias *= factor;
}

} // namespace hqtn::model
