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

#include "hqtn/metrics.hpp"

#include <fmt/format.h>

#include "hqtn/errors.hpp"

namespace hqtn::data {

MetricsReport compute_metrics(const std::vector<int> &y_true, const std::vector<int> &y_pred,
                              int n_classes) {
    if (y_true.size() != y_pred.size()) {
        throw DimensionError("truth/prediction lengths differ");
    }
    if (n_classes < 1) {
        throw ArgumentError("n_classes must be >= 1");
    }

    MetricsReport report;
    report.total = static_cast<std::int64_t>(y_true.size());
    report.confusion.assign(static_cast<std::size_t>(n_classes),
                            std::vector<std::int64_t>(static_cast<std::size_t>(n_classes), 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] < 0 || y_true[i] >= n_classes || y_pred[i] < 0 ||
            y_pred[i] >= n_classes) {
            throw ArgumentError("class index out of range in metrics input");
        }
        ++report.confusion[static_cast<std::size_t>(y_true[i])]
                          [static_cast<std::size_t>(y_pred[i])];
    }

    report.precision.resize(static_cast<std::size_t>(n_classes));
    report.recall.resize(static_cast<std::size_t>(n_classes));
    report.f1.resize(static_cast<std::size_t>(n_classes));

    std::int64_t trace = 0;
    for (int c = 0; c < n_classes; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        std::int64_t tp = report.confusion[uc][uc];
        std::int64_t pred_count = 0;
        std::int64_t true_count = 0;
        for (int other = 0; other < n_classes; ++other) {
            pred_count += report.confusion[static_cast<std::size_t>(other)][uc];
            true_count += report.confusion[uc][static_cast<std::size_t>(other)];
        }
        trace += tp;
        const double p = pred_count > 0 ? static_cast<double>(tp) / pred_count : 0.0;
        const double r = true_count > 0 ? static_cast<double>(tp) / true_count : 0.0;
        report.precision[uc] = p;
        report.recall[uc] = r;
        report.f1[uc] = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;

        report.macro_precision += p / n_classes;
        report.macro_recall += r / n_classes;
        report.macro_f1 += report.f1[uc] / n_classes;
        if (report.total > 0) {
            const double weight = static_cast<double>(true_count) / report.total;
            report.weighted_precision += weight * p;
            report.weighted_recall += weight * r;
            report.weighted_f1 += weight * report.f1[uc];
        }
    }
    report.accuracy = report.total > 0 ? static_cast<double>(trace) / report.total : 0.0;
    return report;
}

std::string format_metrics(const MetricsReport &report,
                           const std::vector<std::string> &class_names) {
    std::string out;
    const auto n_classes = report.precision.size();
    out += fmt::format("{:<12} {:>10} {:>10} {:>10} {:>8}\n", "class", "precision", "recall",
                       "f1", "support");
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::int64_t support = 0;
        for (const std::int64_t v : report.confusion[c]) {
            support += v;
        }
        const std::string name =
            c < class_names.size() ? class_names[c] : fmt::format("class_{}", c);
        out += fmt::format("{:<12} {:>10.4f} {:>10.4f} {:>10.4f} {:>8}\n", name,
                           report.precision[c], report.recall[c], report.f1[c], support);
    }
    out += fmt::format("{:<12} {:>10.4f} {:>10.4f} {:>10.4f} {:>8}\n", "macro",
                       report.macro_precision, report.macro_recall, report.macro_f1,
                       report.total);
    out += fmt::format("{:<12} {:>10.4f} {:>10.4f} {:>10.4f} {:>8}\n", "weighted",
                       report.weighted_precision, report.weighted_recall, report.weighted_f1,
                       report.total);
    out += fmt::format("accuracy     {:.4f}\n", report.accuracy);
    return out;
}

std::string metrics_key_values(const MetricsReport &report) {
    std::string out;
    out += fmt::format("accuracy = {:.17g}\n", report.accuracy);
    out += fmt::format("macro_precision = {:.17g}\n", report.macro_precision);
    out += fmt::format("macro_recall = {:.17g}\n", report.macro_recall);
    out += fmt::format("macro_f1 = {:.17g}\n", report.macro_f1);
    out += fmt::format("weighted_precision = {:.17g}\n", report.weighted_precision);
    out += fmt::format("weighted_recall = {:.17g}\n", report.weighted_recall);
    out += fmt::format("weighted_f1 = {:.17g}\n", report.weighted_f1);
    out += fmt::format("total = {}\n", report.total);
    for (std::size_t c = 0; c < report.precision.size(); ++c) {
        out += fmt::format("class_{}_precision = {:.17g}\n", c, report.precision[c]);
        out += fmt::format("class_{}_recall = {:.17g}\n", c, report.recall[c]);
        out += fmt::format("class_{}_f1 = {:.17g}\n", c, report.f1[c]);
    }
    return out;
}

} // namespace hqtn::data
