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
 * PCA compression fit on training data only. Feature dimension D is much
 * larger than the sample count here, so the fit eigendecomposes the N x N
 * Gram matrix instead of the D x D covariance and maps the eigenvectors
 * back to feature space.
 */

#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace hqtn::pca {

struct PcaModel {
    Eigen::VectorXd mean;        ///< length D
    Eigen::MatrixXd components;  ///< D x k, orthonormal columns, descending variance
    Eigen::VectorXd explained_variance; ///< length k, non-increasing, >= 0

    [[nodiscard]] Eigen::Index input_dim() const { return mean.size(); }
    [[nodiscard]] Eigen::Index k() const { return components.cols(); }
};

/// Fits the top-k principal directions of the mean-centered rows of
/// `train_features` (N x D). Variances use the unbiased (N-1) divisor. Sign
/// convention: each component's largest-magnitude entry is positive. When
/// the data rank r is below k, the remaining columns are a deterministic
/// orthonormal completion with zero explained variance and a warning is
/// appended to `warnings` (when given).
/// Throws ArgumentError when N < k or D < k.
PcaModel fit_pca(const Eigen::MatrixXd &train_features, int k,
                 std::vector<std::string> *warnings = nullptr);

/// components^T (x - mean). Throws DimensionError on length mismatch.
Eigen::VectorXd pca_transform(const PcaModel &model, const Eigen::VectorXd &x);

/// Transforms every row of a feature matrix.
Eigen::MatrixXd pca_transform_all(const PcaModel &model, const Eigen::MatrixXd &features);

} // namespace hqtn::pca
