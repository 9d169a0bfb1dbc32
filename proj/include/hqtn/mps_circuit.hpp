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
 * Matrix-product-state structured variational circuit: angle-encoded inputs,
 * per-qubit RZ/RY blocks interleaved with a nearest-neighbor CNOT sweep, Z
 * expectation features, and exact parameter-shift gradients.
 */

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hqtn/state_vector.hpp"

namespace hqtn::qsim {

enum class GateKind { Ry, Rz, Cnot };

/// One entry of a circuit's gate plan. Rotation gates carry either a
/// trainable parameter slot or an encoding input slot; CNOTs carry neither.
struct GateOp {
    GateKind kind;
    std::size_t qubit;        ///< target qubit; rotation target or CNOT control
    std::size_t partner;      ///< CNOT target; unused for rotations
    int theta_slot = -1;      ///< index into the trainable parameter vector
    int input_slot = -1;      ///< index into the encoding input vector
};

/// Circuit description: qubit count, layer count, and the ordered gate plan
/// (encoding RY gates first, then the variational layers).
struct MpsCircuit {
    std::size_t n_qubits = 0;
    std::size_t n_layers = 0;
    std::vector<GateOp> plan;

    /// Trainable parameter count, 2 * n_qubits * n_layers.
    [[nodiscard]] std::size_t num_params() const { return 2 * n_qubits * n_layers; }
};

/// Builds the MPS ansatz. Per layer, each qubit gets RZ then RY (the block
/// U_k = R_y R_z applied right-to-left), followed by the CNOT chain
/// (0->1), (1->2), ..., (n-2 -> n-1). Trainable slots are ordered layer by
/// layer, qubit by qubit, Z angle before Y angle.
/// Throws ArgumentError for n_qubits < 2 or n_layers < 1.
MpsCircuit build_mps_circuit(std::size_t n_qubits, std::size_t n_layers);

/// Applies the full plan to |0...0> with inputs u and parameters theta bound
/// in slot order. Throws DimensionError on size mismatch.
StateVector run_circuit(const MpsCircuit &circuit, std::span<const double> u,
                        std::span<const double> theta);

/// <Z_k> for every qubit after run_circuit; each entry lies in [-1, 1].
std::vector<double> quantum_features(const MpsCircuit &circuit, std::span<const double> u,
                                     std::span<const double> theta);

/// Exact parameter-shift Jacobian of the Z features. Row q is qubit q's
/// feature; columns 0 .. 2nL-1 follow the trainable slot order and the last
/// n columns differentiate the encoding angles u_k (the same +-pi/2 shift
/// identity holds for the encoding RY gates).
Eigen::MatrixXd param_shift_jacobian(const MpsCircuit &circuit, std::span<const double> u,
                                     std::span<const double> theta);

} // namespace hqtn::qsim
