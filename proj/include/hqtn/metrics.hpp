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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hqtn::data {

/// Confusion matrix (rows = true class, columns = predicted) with per-class
/// and averaged precision/recall/F1.
struct MetricsReport {
    std::vector<std::vector<std::int64_t>> confusion;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    double accuracy = 0.0;
    std::int64_t total = 0;
};

/// Builds the report from aligned truth/prediction lists. A class with
/// P + R == 0 gets F1 = 0; a class with no predictions gets precision 0 and
/// a class with no true samples gets recall 0.
MetricsReport compute_metrics(const std::vector<int> &y_true, const std::vector<int> &y_pred,
                              int n_classes);

/// Plain-text table (per-class rows plus macro/weighted summary).
std::string format_metrics(const MetricsReport &report,
                           const std::vector<std::string> &class_names = {});

/// Machine-readable key=value lines.
std::string metrics_key_values(const MetricsReport &report);

} // namespace hqtn::data
