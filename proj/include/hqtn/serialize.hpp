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
 * Binary file formats, all little-endian.
 *
 * Feature cache ("HQTN", version 1):
 *   magic[4] = "HQTN", u16 version, u32 record count, u16 feature dim,
 *   u16 class count, then per record: u16 label, i32 speaker (-1 = absent),
 *   dim * f32 features.
 *
 * Model checkpoint ("HQTM", version 1):
 *   magic[4] = "HQTM", u16 version, u32 config-echo length, config bytes
 *   (key = value lines), u8 pca-present flag, PCA block (u32 D, u16 k,
 *   f64 mean[D], f64 components row-major D x k, f64 variances[k]), model
 *   block (u8 mode, u16 qubits, u16 layers, u16 input dim, u16 classes,
 *   u16 encoder depth, per layer u16 out/in, then all parameter tensors as
 *   f64 in checkpoint order: projection W/b, theta, encoder W/b per layer,
 *   head W/b).
 */

#pragma once

#include <map>
#include <optional>
#include <string>

#include "hqtn/dataset.hpp"
#include "hqtn/hybrid_model.hpp"
#include "hqtn/pca.hpp"

namespace hqtn::io {

inline constexpr std::uint16_t kCacheVersion = 1;
inline constexpr std::uint16_t kCheckpointVersion = 1;

/// Writes the feature cache, holding an advisory flock on the output while
/// writing. Feature values are narrowed to f32.
void write_feature_cache(const std::string &path, const data::FeatureTable &table);

/// Reads a feature cache; throws FormatError on bad magic/version and
/// IoError on short reads. Every record's dataset_tag is set to `tag`.
data::FeatureTable read_feature_cache(const std::string &path, const std::string &tag = "");

struct Checkpoint {
    std::map<std::string, std::string> config_echo;
    std::optional<pca::PcaModel> pca;
    model::ModelConfig model_config;
    model::HybridParams params;
};

void write_checkpoint(const std::string &path, const Checkpoint &checkpoint);
Checkpoint read_checkpoint(const std::string &path);

} // namespace hqtn::io
