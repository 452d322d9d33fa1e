// Copyright 2026 The QResNet Authors
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

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qres {

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    [[nodiscard]] std::size_t total() const noexcept {
        return tp + fp + tn + fn;
    }
    bool operator==(const Confusion &) const = default;
};

/// Tallies predictions `score >= threshold`. Scores must lie in [0, 1].
Confusion confusion(std::span<const double> scores, std::span<const int> labels,
                    double threshold);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0; // +inf for the leading (0, 0) point
};

struct RocCurve {
    double auc = 0.0;
    std::vector<RocPoint> points;
};

/**
 * ROC from a descending sweep over every distinct score, bracketed by +inf
 * and -inf thresholds, with trapezoidal AUC. Tied scores move the curve
 * diagonally, so the area equals the Mann-Whitney statistic with ties
 * counted as one half.
 */
RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels);

struct EvalReport {
    Confusion counts;
    double acc = 0.0;
    double sen = 0.0;
    double spe = 0.0;
    double auc = 0.0;
    std::vector<RocPoint> roc_points;
    double threshold = 0.5;
    bool sen_undefined = false; // no positives: sen reported as 0
    bool spe_undefined = false; // no negatives: spe reported as 0
    bool auc_undefined = false; // single-class labels: auc reported as 0
};

EvalReport make_report(std::span<const double> scores,
                       std::span<const int> labels, double threshold = 0.5);

/// "fpr<TAB>tpr<TAB>threshold" lines, 17 significant digits.
void write_roc(std::ostream &out, std::span<const RocPoint> points);

/// "AUC=0.995 ACC=0.962 SEN=0.942 SPE=0.981"
std::string summary_line(const EvalReport &report);

} // namespace qres
