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

#include "hqtn/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "hqtn/errors.hpp"
#include "hqtn/rng.hpp"

namespace hqtn::data {

namespace {

/// Largest-remainder allocation of `total` items to the three ratios.
std::array<std::size_t, 3> allocate_counts(std::size_t total, const SplitConfig &config) {
    const std::array<double, 3> ratios = {config.train_ratio, config.val_ratio,
                                          config.test_ratio};
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> remainders{};
    std::size_t assigned = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        const double exact = ratios[s] * static_cast<double>(total);
        counts[s] = static_cast<std::size_t>(std::floor(exact));
        remainders[s] = exact - std::floor(exact);
        assigned += counts[s];
    }
    while (assigned < total) {
        std::size_t best = 0;
        for (std::size_t s = 1; s < 3; ++s) {
            if (remainders[s] > remainders[best]) {
                best = s;
            }
        }
        ++counts[best];
        remainders[best] = -1.0;
        ++assigned;
    }
    return counts;
}

} // namespace

SplitPlan make_split(const std::vector<FeatureRecord> &records, const SplitConfig &config,
                     std::vector<std::string> *warnings) {
    const double ratio_sum = config.train_ratio + config.val_ratio + config.test_ratio;
    if (std::abs(ratio_sum - 1.0) > 1e-9) {
        throw ArgumentError("split ratios must sum to 1");
    }
    if (records.empty()) {
        throw ArgumentError("cannot split an empty record set");
    }

    SplitPlan plan;
    plan.mode = config.mode;
    plan.seed = config.seed;
    std::mt19937_64 gen(config.seed);

    if (config.mode == SplitMode::StratifiedRandom) {
        std::map<int, std::vector<std::size_t>> by_label;
        for (std::size_t i = 0; i < records.size(); ++i) {
            by_label[records[i].label].push_back(i);
        }
        for (auto &[label, indices] : by_label) {
            shuffle_indices(indices, gen);
            const auto counts = allocate_counts(indices.size(), config);
            std::size_t cursor = 0;
            for (std::size_t i = 0; i < counts[0]; ++i) {
                plan.train.push_back(indices[cursor++]);
            }
            for (std::size_t i = 0; i < counts[1]; ++i) {
                plan.val.push_back(indices[cursor++]);
            }
            for (std::size_t i = 0; i < counts[2]; ++i) {
                plan.test.push_back(indices[cursor++]);
            }
        }
    } else {
        std::map<int, std::vector<std::size_t>> by_speaker;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].speaker < 0) {
                throw InfeasibleError("speaker-independent split requires speaker ids");
            }
            by_speaker[records[i].speaker].push_back(i);
        }
        if (by_speaker.size() < 3) {
            throw InfeasibleError("speaker-independent split needs at least 3 speakers, got " +
                                  std::to_string(by_speaker.size()));
        }
        std::vector<int> speakers;
        speakers.reserve(by_speaker.size());
        for (const auto &[speaker, indices] : by_speaker) {
            speakers.push_back(speaker);
        }
        shuffle_indices(speakers, gen);

        const auto total = static_cast<double>(records.size());
        const std::array<double, 3> targets = {config.train_ratio * total,
                                               config.val_ratio * total,
                                               config.test_ratio * total};
        std::array<double, 3> filled = {0.0, 0.0, 0.0};
        std::array<std::vector<std::size_t> *, 3> buckets = {&plan.train, &plan.val,
                                                             &plan.test};
        for (const int speaker : speakers) {
            std::size_t best = 0;
            double best_deficit = targets[0] - filled[0];
            for (std::size_t s = 1; s < 3; ++s) {
                const double deficit = targets[s] - filled[s];
                if (deficit > best_deficit) {
                    best_deficit = deficit;
                    best = s;
                }
            }
            const auto &indices = by_speaker[speaker];
            buckets[best]->insert(buckets[best]->end(), indices.begin(), indices.end());
            filled[best] += static_cast<double>(indices.size());
        }
    }

    std::sort(plan.train.begin(), plan.train.end());
    std::sort(plan.val.begin(), plan.val.end());
    std::sort(plan.test.begin(), plan.test.end());

    if (warnings != nullptr) {
        std::set<int> all_labels;
        std::set<int> train_labels;
        for (const auto &r : records) {
            all_labels.insert(r.label);
        }
        for (const std::size_t i : plan.train) {
            train_labels.insert(records[i].label);
        }
        for (const int label : all_labels) {
            if (train_labels.find(label) == train_labels.end()) {
                warnings->push_back("class " + std::to_string(label) +
                                    " is absent from the training split");
            }
        }
    }
    return plan;
}

std::vector<FeatureRecord> gather(const std::vector<FeatureRecord> &records,
                                  const std::vector<std::size_t> &indices) {
    std::vector<FeatureRecord> out;
    out.reserve(indices.size());
    for (const std::size_t i : indices) {
        out.push_back(records[i]);
    }
    return out;
}

std::uint64_t split_hash(const SplitPlan &plan) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xFF;
            h *= 1099511628211ULL;
        }
    };
    for (const auto *list : {&plan.train, &plan.val, &plan.test}) {
        mix(list->size());
        for (const std::size_t i : *list) {
            mix(i);
        }
    }
    return h;
}

std::optional<std::pair<int, int>> parse_ravdess_name(const std::string &stem) {
    std::vector<int> fields;
    std::size_t pos = 0;
    while (pos <= stem.size()) {
        std::size_t end = stem.find('-', pos);
        if (end == std::string::npos) {
            end = stem.size();
        }
        const std::string token = stem.substr(pos, end - pos);
        if (token.empty() ||
            !std::all_of(token.begin(), token.end(),
                         [](unsigned char c) { return std::isdigit(c) != 0; })) {
            return std::nullopt;
        }
        fields.push_back(std::stoi(token));
        if (end == stem.size()) {
            break;
        }
        pos = end + 1;
    }
    if (fields.size() != 7) {
        return std::nullopt;
    }
    const int emotion_code = fields[2];
    const int actor = fields[6];
    if (emotion_code < 1 || emotion_code > 8 || actor < 1) {
        return std::nullopt;
    }
    return std::make_pair(emotion_code - 1, actor);
}

std::optional<std::pair<int, std::string>> parse_savee_name(const std::string &stem) {
    // Optional "XX_" speaker prefix, then the emotion letters, then digits.
    std::string speaker;
    std::string rest = stem;
    const std::size_t underscore = stem.find('_');
    if (underscore != std::string::npos && underscore > 0) {
        speaker = stem.substr(0, underscore);
        rest = stem.substr(underscore + 1);
    }
    int label = -1;
    if (rest.rfind("sa", 0) == 0) {
        label = 5;
    } else if (rest.rfind("su", 0) == 0) {
        label = 6;
    } else if (!rest.empty()) {
        switch (rest[0]) {
        case 'a':
            label = 0;
            break;
        case 'd':
            label = 1;
            break;
        case 'f':
            label = 2;
            break;
        case 'h':
            label = 3;
            break;
        case 'n':
            label = 4;
            break;
        default:
            break;
        }
    }
    if (label < 0) {
        return std::nullopt;
    }
    return std::make_pair(label, speaker);
}

std::vector<std::string> class_names(const std::string &dataset_kind) {
    if (dataset_kind == "ravdess") {
        return {"neutral", "calm",    "happy",   "sad",
                "angry",   "fearful", "disgust", "surprised"};
    }
    if (dataset_kind == "savee") {
        return {"angry", "disgust", "fear", "happy", "neutral", "sad", "surprise"};
    }
    if (dataset_kind == "mder") {
        return {"angry", "fearful", "happy", "neutral", "sad"};
    }
    return {};
}

} // namespace hqtn::data
