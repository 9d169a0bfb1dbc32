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

// Test-only reference implementations, deliberately independent of the
// library's simulation path: explicit dense 2^n x 2^n gate matrices, a naive
// DFT, and a direct covariance-eigendecomposition PCA.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hqtn/mps_circuit.hpp"

namespace oracle {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline ComplexMatrix ry_matrix(double theta) {
    ComplexMatrix m(2, 2);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    m << c, -s, s, c;
    return m;
}

inline ComplexMatrix rz_matrix(double theta) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = std::polar(1.0, -theta / 2.0);
    m(1, 1) = std::polar(1.0, +theta / 2.0);
    return m;
}

/// Embeds a single-qubit gate at `qubit` (qubit 0 = most significant bit):
/// I_{2^q} kron G kron I_{2^{n-1-q}}.
inline ComplexMatrix embed_single(const ComplexMatrix &gate, std::size_t qubit,
                                  std::size_t n_qubits) {
    ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    for (std::size_t q = 0; q < n_qubits; ++q) {
        const ComplexMatrix &factor =
            q == qubit ? gate : ComplexMatrix(ComplexMatrix::Identity(2, 2));
        ComplexMatrix next(m.rows() * factor.rows(), m.cols() * factor.cols());
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                next.block(r * factor.rows(), c * factor.cols(), factor.rows(),
                           factor.cols()) = m(r, c) * factor;
            }
        }
        m = next;
    }
    return m;
}

/// Dense CNOT permutation matrix with the library's bit convention.
inline ComplexMatrix cnot_matrix(std::size_t control, std::size_t target,
                                 std::size_t n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t cmask = std::size_t{1} << (n_qubits - 1 - control);
    const std::size_t tmask = std::size_t{1} << (n_qubits - 1 - target);
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                          static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t j = (i & cmask) != 0 ? (i ^ tmask) : i;
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return m;
}

/// Runs a circuit by multiplying explicit dense gate matrices onto the
/// zero-state vector, in plan order.
inline ComplexVector run_circuit_dense(const hqtn::qsim::MpsCircuit &circuit,
                                       const std::vector<double> &u,
                                       const std::vector<double> &theta) {
    const std::size_t n = circuit.n_qubits;
    const std::size_t dim = std::size_t{1} << n;
    ComplexVector state = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    state(0) = 1.0;
    for (const hqtn::qsim::GateOp &op : circuit.plan) {
        ComplexMatrix gate;
        switch (op.kind) {
        case hqtn::qsim::GateKind::Cnot:
            gate = cnot_matrix(op.qubit, op.partner, n);
            break;
        case hqtn::qsim::GateKind::Ry:
        case hqtn::qsim::GateKind::Rz: {
            const double angle = op.input_slot >= 0
                                     ? u[static_cast<std::size_t>(op.input_slot)]
                                     : theta[static_cast<std::size_t>(op.theta_slot)];
            const ComplexMatrix local =
                op.kind == hqtn::qsim::GateKind::Ry ? ry_matrix(angle) : rz_matrix(angle);
            gate = embed_single(local, op.qubit, n);
            break;
        }
        }
        state = gate * state;
    }
    return state;
}

inline double expect_z_dense(const ComplexVector &state, std::size_t qubit,
                             std::size_t n_qubits) {
    const std::size_t mask = std::size_t{1} << (n_qubits - 1 - qubit);
    double value = 0.0;
    for (Eigen::Index i = 0; i < state.size(); ++i) {
        const double p = std::norm(state(i));
        value += (static_cast<std::size_t>(i) & mask) == 0 ? p : -p;
    }
    return value;
}

/// Central finite difference of a scalar function.
template <class F> double finite_difference(F &&f, double *x, double h = 1e-5) {
    const double original = *x;
    *x = original + h;
    const double up = f();
    *x = original - h;
    const double down = f();
    *x = original;
    return (up - down) / (2.0 * h);
}

/// Power of the DFT at one frequency (naive sum; good enough for peak checks).
inline double dft_power_at(const std::vector<double> &samples, double freq_hz,
                           double sample_rate) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double phase = -2.0 * M_PI * freq_hz * static_cast<double>(i) / sample_rate;
        acc += samples[i] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return std::norm(acc);
}

/// Direct PCA: eigendecompose the D x D covariance, take the top k columns,
/// and apply the same sign convention as the library.
inline Eigen::MatrixXd pca_components_direct(const Eigen::MatrixXd &data, int k) {
    const Eigen::Index n = data.rows();
    Eigen::RowVectorXd mean = data.colwise().mean();
    Eigen::MatrixXd centered = data.rowwise() - mean;
    Eigen::MatrixXd cov = centered.transpose() * centered /
                          static_cast<double>(n > 1 ? n - 1 : 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    Eigen::MatrixXd components(data.cols(), k);
    for (int c = 0; c < k; ++c) {
        Eigen::VectorXd v = solver.eigenvectors().col(data.cols() - 1 - c);
        Eigen::Index argmax = 0;
        double best = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (std::abs(v(i)) > best) {
                best = std::abs(v(i));
                argmax = i;
            }
        }
        if (v(argmax) < 0.0) {
            v = -v;
        }
        components.col(c) = v;
    }
    return components;
}

} // namespace oracle
