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

#include "hqtn/mps_circuit.hpp"

#include <cmath>
#include <numbers>

#include "hqtn/errors.hpp"

namespace hqtn::qsim {

MpsCircuit build_mps_circuit(std::size_t n_qubits, std::size_t n_layers) {
    if (n_qubits < 2) {
        throw ArgumentError("MPS circuit needs at least 2 qubits for the entangling chain");
    }
    if (n_qubits > kMaxQubits) {
        throw CapacityError("qubit count must be <= 8");
    }
    if (n_layers < 1) {
        throw ArgumentError("MPS circuit needs at least 1 layer");
    }

    MpsCircuit circuit;
    circuit.n_qubits = n_qubits;
    circuit.n_layers = n_layers;
    circuit.plan.reserve(n_qubits + n_layers * (3 * n_qubits - 1));

    for (std::size_t k = 0; k < n_qubits; ++k) {
        circuit.plan.push_back({GateKind::Ry, k, 0, -1, static_cast<int>(k)});
    }
    for (std::size_t layer = 0; layer < n_layers; ++layer) {
        const std::size_t base = layer * 2 * n_qubits;
        for (std::size_t k = 0; k < n_qubits; ++k) {
            circuit.plan.push_back(
                {GateKind::Rz, k, 0, static_cast<int>(base + 2 * k), -1});
            circuit.plan.push_back(
                {GateKind::Ry, k, 0, static_cast<int>(base + 2 * k + 1), -1});
        }
        for (std::size_t k = 0; k + 1 < n_qubits; ++k) {
            circuit.plan.push_back({GateKind::Cnot, k, k + 1, -1, -1});
        }
    }
    return circuit;
}

namespace {

void apply_plan(StateVector &state, const MpsCircuit &circuit, std::span<const double> u,
                std::span<const double> theta) {
    for (const GateOp &op : circuit.plan) {
        switch (op.kind) {
        case GateKind::Cnot:
            state.apply_cnot(op.qubit, op.partner);
            break;
        case GateKind::Ry:
        case GateKind::Rz: {
            const double angle =
                op.input_slot >= 0 ? u[static_cast<std::size_t>(op.input_slot)]
                                   : theta[static_cast<std::size_t>(op.theta_slot)];
            if (op.kind == GateKind::Ry) {
                state.apply_ry(op.qubit, angle);
            } else {
                state.apply_rz(op.qubit, angle);
            }
            break;
        }
        }
    }
}

void check_shapes(const MpsCircuit &circuit, std::span<const double> u,
                  std::span<const double> theta) {
    if (u.size() != circuit.n_qubits) {
        throw DimensionError("encoding input length " + std::to_string(u.size()) +
                             " does not match qubit count " +
                             std::to_string(circuit.n_qubits));
    }
    if (theta.size() != circuit.num_params()) {
        throw DimensionError("parameter vector length " + std::to_string(theta.size()) +
                             " does not match circuit parameter count " +
                             std::to_string(circuit.num_params()));
    }
}

} // namespace

StateVector run_circuit(const MpsCircuit &circuit, std::span<const double> u,
                        std::span<const double> theta) {
    check_shapes(circuit, u, theta);
    StateVector state(circuit.n_qubits);
    apply_plan(state, circuit, u, theta);
    return state;
}

std::vector<double> quantum_features(const MpsCircuit &circuit, std::span<const double> u,
                                     std::span<const double> theta) {
    const StateVector state = run_circuit(circuit, u, theta);
    std::vector<double> features(circuit.n_qubits);
    for (std::size_t q = 0; q < circuit.n_qubits; ++q) {
        features[q] = state.expect_z(q);
    }
    return features;
}

Eigen::MatrixXd param_shift_jacobian(const MpsCircuit &circuit, std::span<const double> u,
                                     std::span<const double> theta) {
    check_shapes(circuit, u, theta);
    constexpr double shift = std::numbers::pi / 2.0;
    const std::size_t n = circuit.n_qubits;
    const std::size_t n_theta = circuit.num_params();

    Eigen::MatrixXd jacobian(static_cast<Eigen::Index>(n),
                             static_cast<Eigen::Index>(n_theta + n));

    std::vector<double> theta_work(theta.begin(), theta.end());
    std::vector<double> u_work(u.begin(), u.end());

    auto fill_column = [&](std::size_t col, double *angle) {
        const double original = *angle;
        *angle = original + shift;
        const std::vector<double> z_plus = quantum_features(circuit, u_work, theta_work);
        *angle = original - shift;
        const std::vector<double> z_minus = quantum_features(circuit, u_work, theta_work);
        *angle = original;
        for (std::size_t q = 0; q < n; ++q) {
            jacobian(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(col)) =
                0.5 * (z_plus[q] - z_minus[q]);
        }
    };

    for (std::size_t j = 0; j < n_theta; ++j) {
        fill_column(j, &theta_work[j]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        fill_column(n_theta + k, &u_work[k]);
    }
    return jacobian;
}

} // namespace hqtn::qsim
