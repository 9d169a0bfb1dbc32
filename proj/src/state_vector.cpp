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

#include "hqtn/state_vector.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hqtn/errors.hpp"
#include "hqtn/rng.hpp"

namespace hqtn::qsim {

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("qubit count must be in [1, 8], got " + std::to_string(n_qubits));
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, ComplexT{0.0, 0.0});
    amplitudes_[0] = ComplexT{1.0, 0.0};
}

void StateVector::set_amplitudes(std::span<const ComplexT> values) {
    if (values.size() != amplitudes_.size()) {
        throw DimensionError("amplitude count mismatch");
    }
    std::copy(values.begin(), values.end(), amplitudes_.begin());
}

std::size_t StateVector::qubit_mask(std::size_t qubit) const {
    return std::size_t{1} << (n_qubits_ - 1 - qubit);
}

void StateVector::check_qubit(std::size_t qubit) const {
    if (qubit >= n_qubits_) {
        throw ArgumentError("qubit index " + std::to_string(qubit) + " out of range for " +
                            std::to_string(n_qubits_) + " qubits");
    }
}

void StateVector::apply_ry(std::size_t qubit, double angle) {
    check_qubit(qubit);
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const std::size_t mask = qubit_mask(qubit);
    const std::size_t dim = amplitudes_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & mask) != 0) {
            continue;
        }
        const std::size_t j = i | mask;
        const ComplexT a0 = amplitudes_[i];
        const ComplexT a1 = amplitudes_[j];
        amplitudes_[i] = c * a0 - s * a1;
        amplitudes_[j] = s * a0 + c * a1;
    }
}

void StateVector::apply_rz(std::size_t qubit, double angle) {
    check_qubit(qubit);
    const ComplexT phase_lo = std::polar(1.0, -angle / 2.0);
    const ComplexT phase_hi = std::polar(1.0, +angle / 2.0);
    const std::size_t mask = qubit_mask(qubit);
    const std::size_t dim = amplitudes_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        amplitudes_[i] *= ((i & mask) == 0) ? phase_lo : phase_hi;
    }
}

void StateVector::apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw ArgumentError("CNOT control and target must differ");
    }
    const std::size_t cmask = qubit_mask(control);
    const std::size_t tmask = qubit_mask(target);
    const std::size_t dim = amplitudes_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cmask) != 0 && (i & tmask) == 0) {
            std::swap(amplitudes_[i], amplitudes_[i | tmask]);
        }
    }
}

double StateVector::expect_z(std::size_t qubit) const {
    check_qubit(qubit);
    const std::size_t mask = qubit_mask(qubit);
    double value = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const double p = std::norm(amplitudes_[i]);
        value += ((i & mask) == 0) ? p : -p;
    }
    return value;
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

StateVector zero_state(std::size_t n_qubits) { return StateVector(n_qubits); }

StateVector angle_encode(std::span<const double> u) {
    StateVector state(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        state.apply_ry(k, u[k]);
    }
    return state;
}

std::vector<double> sample_z_estimates(const StateVector &state, std::size_t shots,
                                       std::uint64_t seed) {
    if (shots == 0) {
        throw ArgumentError("shots must be >= 1");
    }
    const std::size_t n = state.num_qubits();
    const std::size_t dim = state.size();

    // Inverse-CDF sampling over basis-state probabilities.
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        acc += std::norm(state.amplitude(i));
        cdf[i] = acc;
    }
    const double total = cdf.back();

    std::mt19937_64 gen(seed);
    std::vector<std::int64_t> bit_sums(n, 0);
    for (std::size_t s = 0; s < shots; ++s) {
        const double r = uniform01(gen) * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        const std::size_t outcome =
            std::min(static_cast<std::size_t>(it - cdf.begin()), dim - 1);
        for (std::size_t q = 0; q < n; ++q) {
            bit_sums[q] += ((outcome & state.qubit_mask(q)) == 0) ? 1 : -1;
        }
    }

    std::vector<double> estimates(n);
    for (std::size_t q = 0; q < n; ++q) {
        estimates[q] = static_cast<double>(bit_sums[q]) / static_cast<double>(shots);
    }
    return estimates;
}

} // namespace hqtn::qsim
