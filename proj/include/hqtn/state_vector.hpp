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
 * Dense statevector with the RY/RZ/CNOT gate set, Z expectations, and
 * finite-shot sampling of computational-basis measurements.
 *
 * Bit convention: qubit 0 is the most significant bit of the basis index,
 * i.e. the leftmost position in ket notation. |100> on three qubits is
 * basis index 4.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace hqtn::qsim {

inline constexpr std::size_t kMaxQubits = 8;

class StateVector {
  public:
    using ComplexT = std::complex<double>;

    /// Constructs |0...0> on n qubits. Throws CapacityError unless 1 <= n <= 8.
    explicit StateVector(std::size_t n_qubits);

    [[nodiscard]] std::size_t num_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t size() const { return amplitudes_.size(); }

    [[nodiscard]] const std::vector<ComplexT> &amplitudes() const { return amplitudes_; }
    [[nodiscard]] ComplexT amplitude(std::size_t basis_index) const {
        return amplitudes_[basis_index];
    }

    /// Overwrites amplitudes; length must be 2^n. No normalization is applied.
    void set_amplitudes(std::span<const ComplexT> values);

    /// R_y(theta) = exp(-i theta Y/2) on one qubit, in place.
    void apply_ry(std::size_t qubit, double angle);

    /// R_z(theta) = diag(e^{-i theta/2}, e^{+i theta/2}) on one qubit, in place.
    void apply_rz(std::size_t qubit, double angle);

    /// CNOT with the given control and target, in place.
    void apply_cnot(std::size_t control, std::size_t target);

    /// <Z_qubit>, the signed probability mass of the qubit's bit.
    [[nodiscard]] double expect_z(std::size_t qubit) const;

    /// Sum of squared amplitude magnitudes.
    [[nodiscard]] double norm_squared() const;

    /// Basis-index mask selecting the given qubit's bit (qubit 0 = MSB).
    [[nodiscard]] std::size_t qubit_mask(std::size_t qubit) const;

  private:
    void check_qubit(std::size_t qubit) const;

    std::size_t n_qubits_;
    std::vector<ComplexT> amplitudes_;
};

/// |0...0> on n qubits.
StateVector zero_state(std::size_t n_qubits);

/// Angle encoding: RY(u_k) on qubit k of the zero state, one input per qubit.
StateVector angle_encode(std::span<const double> u);

/// Per-qubit empirical <Z> from `shots` full basis-state samples drawn from
/// |amplitude|^2. Deterministic for a fixed seed. Throws ArgumentError when
/// shots == 0.
std::vector<double> sample_z_estimates(const StateVector &state, std::size_t shots,
                                       std::uint64_t seed);

} // namespace hqtn::qsim
