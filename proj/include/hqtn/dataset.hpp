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
 * Feature records, deterministic train/val/test splitting (stratified or
 * speaker-independent), and dataset label conventions.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hqtn::data {

struct FeatureRecord {
    std::vector<double> features;
    int label = 0;
    int speaker = -1; ///< -1 when absent
    std::string dataset_tag;
};

/// A dataset in memory: records plus the metadata the cache file carries.
struct FeatureTable {
    std::vector<FeatureRecord> records;
    int dim = 0;
    int n_classes = 0;
};

enum class SplitMode { StratifiedRandom, SpeakerIndependent };

struct SplitConfig {
    double train_ratio = 0.7;
    double val_ratio = 0.15;
    double test_ratio = 0.15;
    SplitMode mode = SplitMode::StratifiedRandom;
    std::uint64_t seed = 42;
};

struct SplitPlan {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
    SplitMode mode = SplitMode::StratifiedRandom;
    std::uint64_t seed = 42;
};

/// Partitions record indices. Stratified mode shuffles within each class and
/// allocates per-class counts by largest remainder; speaker mode assigns
/// whole speakers greedily to the split with the largest remaining deficit.
/// Throws ArgumentError for ratios not summing to 1 and InfeasibleError for
/// speaker mode with fewer than 3 speakers (or missing speaker ids). A class
/// absent from the training split appends a warning when `warnings` is given.
SplitPlan make_split(const std::vector<FeatureRecord> &records, const SplitConfig &config,
                     std::vector<std::string> *warnings = nullptr);

/// Gathers the records selected by an index list.
std::vector<FeatureRecord> gather(const std::vector<FeatureRecord> &records,
                                  const std::vector<std::size_t> &indices);

/// FNV-1a over the three index lists; identical plans hash identically.
std::uint64_t split_hash(const SplitPlan &plan);

/// RAVDESS filename convention: seven dash-separated numeric fields; field 3
/// is the emotion code (1..8) and field 7 the actor. Returns label in 0..7
/// plus the actor id, or nullopt for non-conforming names.
std::optional<std::pair<int, int>> parse_ravdess_name(const std::string &stem);

/// SAVEE naming: emotion letter code ('a', 'd', 'f', 'h', 'n', 'sa', 'su')
/// followed by digits; the speaker comes from a directory name or filename
/// prefix such as "DC_a01". Returns (label, speaker code string).
std::optional<std::pair<int, std::string>> parse_savee_name(const std::string &stem);

/// Class display names per dataset kind ("ravdess", "savee", "mder"); empty
/// for unknown kinds.
std::vector<std::string> class_names(const std::string &dataset_kind);

} // namespace hqtn::data
