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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "hqtn/dataset.hpp"
#include "hqtn/errors.hpp"

using namespace hqtn;
using data::FeatureRecord;
using data::SplitConfig;
using data::SplitMode;
using data::SplitPlan;

namespace {

std::vector<FeatureRecord> labeled_records(int n_classes, int per_class,
                                           int speakers = 0) {
    std::vector<FeatureRecord> records;
    int i = 0;
    for (int c = 0; c < n_classes; ++c) {
        for (int s = 0; s < per_class; ++s) {
            FeatureRecord r;
            r.features = {static_cast<double>(i)};
            r.label = c;
            r.speaker = speakers > 0 ? i % speakers : -1;
            records.push_back(std::move(r));
            ++i;
        }
    }
    return records;
}

std::set<std::size_t> as_set(const std::vector<std::size_t> &v) {
    return {v.begin(), v.end()};
}

} // namespace

TEST_CASE("stratified split allocates 6/2/2 per class", "[dataset]") {
    const auto records = labeled_records(10, 10);
    SplitConfig config;
    config.train_ratio = 0.6;
    config.val_ratio = 0.2;
    config.test_ratio = 0.2;
    const SplitPlan plan = data::make_split(records, config);

    REQUIRE(plan.train.size() == 60);
    REQUIRE(plan.val.size() == 20);
    REQUIRE(plan.test.size() == 20);

    for (int c = 0; c < 10; ++c) {
        auto count = [&](const std::vector<std::size_t> &idx) {
            return std::count_if(idx.begin(), idx.end(),
                                 [&](std::size_t i) { return records[i].label == c; });
        };
        REQUIRE(count(plan.train) == 6);
        REQUIRE(count(plan.val) == 2);
        REQUIRE(count(plan.test) == 2);
    }
}

TEST_CASE("splits are disjoint and cover everything", "[dataset][property]") {
    const auto records = labeled_records(7, 13);
    SplitConfig config;
    const SplitPlan plan = data::make_split(records, config);

    const auto train = as_set(plan.train);
    const auto val = as_set(plan.val);
    const auto test = as_set(plan.test);
    REQUIRE(train.size() + val.size() + test.size() == records.size());
    for (const std::size_t i : val) {
        REQUIRE(train.find(i) == train.end());
        REQUIRE(test.find(i) == test.end());
    }
    for (const std::size_t i : test) {
        REQUIRE(train.find(i) == train.end());
    }
}

TEST_CASE("speaker split keeps speakers exclusive", "[dataset]") {
    // SAVEE-like: 4 speakers, even utterance counts.
    const auto records = labeled_records(7, 16, 4);
    SplitConfig config;
    config.train_ratio = 0.6;
    config.val_ratio = 0.2;
    config.test_ratio = 0.2;
    config.mode = SplitMode::SpeakerIndependent;
    const SplitPlan plan = data::make_split(records, config);

    auto speakers_of = [&](const std::vector<std::size_t> &idx) {
        std::set<int> s;
        for (const std::size_t i : idx) {
            s.insert(records[i].speaker);
        }
        return s;
    };
    const auto train_speakers = speakers_of(plan.train);
    const auto val_speakers = speakers_of(plan.val);
    const auto test_speakers = speakers_of(plan.test);
    REQUIRE(train_speakers.size() == 2);
    REQUIRE(val_speakers.size() == 1);
    REQUIRE(test_speakers.size() == 1);
    for (const int s : train_speakers) {
        REQUIRE(val_speakers.find(s) == val_speakers.end());
        REQUIRE(test_speakers.find(s) == test_speakers.end());
    }
    for (const int s : val_speakers) {
        REQUIRE(test_speakers.find(s) == test_speakers.end());
    }
}

TEST_CASE("same seed reproduces the same plan", "[dataset]") {
    const auto records = labeled_records(5, 20, 5);
    SplitConfig config;
    config.mode = SplitMode::SpeakerIndependent;
    config.train_ratio = 0.6;
    config.val_ratio = 0.2;
    config.test_ratio = 0.2;
    const SplitPlan a = data::make_split(records, config);
    const SplitPlan b = data::make_split(records, config);
    REQUIRE(a.train == b.train);
    REQUIRE(a.val == b.val);
    REQUIRE(a.test == b.test);
    REQUIRE(data::split_hash(a) == data::split_hash(b));

    config.seed = 43;
    const SplitPlan c = data::make_split(records, config);
    REQUIRE(data::split_hash(a) != data::split_hash(c));
}

TEST_CASE("split error paths and warnings", "[dataset]") {
    const auto records = labeled_records(3, 10);
    SplitConfig bad;
    bad.train_ratio = 0.5;
    bad.val_ratio = 0.2;
    bad.test_ratio = 0.2;
    REQUIRE_THROWS_AS(data::make_split(records, bad), ArgumentError);

    SplitConfig speaker_mode;
    speaker_mode.mode = SplitMode::SpeakerIndependent;
    REQUIRE_THROWS_AS(data::make_split(records, speaker_mode), InfeasibleError);

    const auto two_speakers = labeled_records(3, 10, 2);
    REQUIRE_THROWS_AS(data::make_split(two_speakers, speaker_mode), InfeasibleError);

    // One lone sample of class 0 that lands outside the training split.
    std::vector<FeatureRecord> lopsided = labeled_records(1, 1);
    for (int i = 0; i < 10; ++i) {
        FeatureRecord r;
        r.features = {0.0};
        r.label = 1;
        lopsided.push_back(std::move(r));
    }
    SplitConfig valley;
    valley.train_ratio = 0.0;
    valley.val_ratio = 0.5;
    valley.test_ratio = 0.5;
    std::vector<std::string> warnings;
    data::make_split(lopsided, valley, &warnings);
    REQUIRE_FALSE(warnings.empty());
}

TEST_CASE("ravdess filenames parse to label and actor", "[dataset]") {
    const auto parsed = data::parse_ravdess_name("03-01-05-01-01-01-12");
    REQUIRE(parsed.has_value());
    REQUIRE(parsed->first == 4); // emotion code 05 = angry, zero-based index 4
    REQUIRE(parsed->second == 12);

    REQUIRE_FALSE(data::parse_ravdess_name("03-01-05-01-01-01").has_value());
    REQUIRE_FALSE(data::parse_ravdess_name("notafile").has_value());
    REQUIRE_FALSE(data::parse_ravdess_name("03-01-09-01-01-01-12").has_value());
}

TEST_CASE("savee filenames parse to label and speaker", "[dataset]") {
    const auto dc = data::parse_savee_name("DC_a01");
    REQUIRE(dc.has_value());
    REQUIRE(dc->first == 0);
    REQUIRE(dc->second == "DC");

    const auto sad = data::parse_savee_name("sa12");
    REQUIRE(sad.has_value());
    REQUIRE(sad->first == 5);
    REQUIRE(sad->second.empty());

    const auto surprise = data::parse_savee_name("JK_su03");
    REQUIRE(surprise.has_value());
    REQUIRE(surprise->first == 6);
    REQUIRE(surprise->second == "JK");

    REQUIRE_FALSE(data::parse_savee_name("x01").has_value());
}

TEST_CASE("class name tables match the dataset kinds", "[dataset]") {
    REQUIRE(data::class_names("ravdess").size() == 8);
    REQUIRE(data::class_names("savee").size() == 7);
    REQUIRE(data::class_names("mder").size() == 5);
    REQUIRE(data::class_names("ravdess")[4] == "angry");
    REQUIRE(data::class_names("unknown").empty());
}
