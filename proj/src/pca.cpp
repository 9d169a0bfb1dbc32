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

#include "hqtn/pca.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "hqtn/errors.hpp"

namespace hqtn::pca {

namespace {

/// Flips a component so its largest-magnitude entry (first occurrence) is
/// positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> component) {
    Eigen::Index argmax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < component.size(); ++i) {
        const double mag = std::abs(component(i));
        if (mag > best) {
            best = mag;
            argmax = i;
        }
    }
    if (component(argmax) < 0.0) {
        component = -component;
    }
}

/// Deterministic orthonormal completion: orthogonalize canonical basis
/// vectors e_0, e_1, ... against the columns already present and keep those
/// with enough residual mass.
void complete_orthonormal(Eigen::MatrixXd &components, Eigen::Index filled) {
    const Eigen::Index dim = components.rows();
    const Eigen::Index k = components.cols();
    Eigen::Index next = filled;
    for (Eigen::Index e = 0; e < dim && next < k; ++e) {
        Eigen::VectorXd candidate = Eigen::VectorXd::Zero(dim);
        candidate(e) = 1.0;
        for (Eigen::Index c = 0; c < next; ++c) {
            candidate -= components.col(c).dot(candidate) * components.col(c);
        }
        const double norm = candidate.norm();
        if (norm > 0.5) {
            components.col(next) = candidate / norm;
            fix_sign(components.col(next));
            ++next;
        }
    }
    if (next < k) {
        throw NumericError("orthonormal completion failed");
    }
}

} // namespace

PcaModel fit_pca(const Eigen::MatrixXd &train_features, int k,
                 std::vector<std::string> *warnings) {
    const Eigen::Index n = train_features.rows();
    const Eigen::Index dim = train_features.cols();
    if (k < 1) {
        throw ArgumentError("k must be >= 1");
    }
    if (n < k) {
        throw ArgumentError("insufficient samples: need at least " + std::to_string(k) +
                            ", got " + std::to_string(n));
    }
    if (dim < k) {
        throw ArgumentError("feature dimension below k");
    }

    PcaModel model;
    model.mean = train_features.colwise().mean();
    const Eigen::MatrixXd centered = train_features.rowwise() - model.mean.transpose();
    const double divisor = n > 1 ? static_cast<double>(n - 1) : 1.0;

    // Eigendecompose whichever matrix is smaller. With N <= D (the audio
    // regime, D in the tens of thousands) the N x N Gram matrix
    // (Xc Xc^T)/(N-1) shares the covariance eigenvalues, and its
    // eigenvectors map back to feature space as Xc^T v / sqrt((N-1) lambda).
    const bool gram_route = n <= dim;
    const Eigen::MatrixXd working =
        gram_route ? Eigen::MatrixXd(centered * centered.transpose() / divisor)
                   : Eigen::MatrixXd(centered.transpose() * centered / divisor);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(working);
    if (solver.info() != Eigen::Success) {
        throw NumericError("PCA eigendecomposition failed");
    }

    model.components.resize(dim, k);
    model.explained_variance.resize(k);

    const Eigen::VectorXd &eigenvalues = solver.eigenvalues(); // ascending
    const Eigen::Index spectrum_size = working.rows();
    const double lambda_max = std::max(eigenvalues(spectrum_size - 1), 0.0);
    const double rank_tol = lambda_max * 1e-10;

    Eigen::Index filled = 0;
    for (Eigen::Index i = spectrum_size - 1; i >= 0 && filled < k; --i) {
        const double lambda = eigenvalues(i);
        if (lambda <= rank_tol || lambda <= 0.0) {
            break;
        }
        Eigen::VectorXd direction =
            gram_route ? Eigen::VectorXd(centered.transpose() * solver.eigenvectors().col(i) /
                                         std::sqrt(lambda * divisor))
                       : Eigen::VectorXd(solver.eigenvectors().col(i));
        direction /= direction.norm();
        fix_sign(direction);
        model.components.col(filled) = direction;
        model.explained_variance(filled) = lambda;
        ++filled;
    }

    if (filled < k) {
        for (Eigen::Index c = filled; c < k; ++c) {
            model.explained_variance(c) = 0.0;
        }
        complete_orthonormal(model.components, filled);
        if (warnings != nullptr) {
            warnings->push_back("rank-deficient data: kept " + std::to_string(filled) +
                                " true components of " + std::to_string(k) +
                                ", padded the rest with zero-variance directions");
        }
    }
    return model;
}

Eigen::VectorXd pca_transform(const PcaModel &model, const Eigen::VectorXd &x) {
    if (x.size() != model.mean.size()) {
        throw DimensionError("pca_transform input length mismatch");
    }
    return model.components.transpose() * (x - model.mean);
}

Eigen::MatrixXd pca_transform_all(const PcaModel &model, const Eigen::MatrixXd &features) {
    if (features.cols() != model.mean.size()) {
        throw DimensionError("pca_transform input width mismatch");
    }
    return (features.rowwise() - model.mean.transpose()) * model.components;
}

} // namespace hqtn::pca
