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
#include "qres/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "qres/error.hpp"

namespace qres {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
    if (scores.empty()) {
        throw ArgumentError("metrics need at least one score");
    }
    if (scores.size() != labels.size()) {
        throw ArgumentError("got " + std::to_string(scores.size()) +
                            " scores but " + std::to_string(labels.size()) +
                            " labels");
    }
    for (double s : scores) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw ArgumentError("score " + std::to_string(s) +
                                " outside [0, 1]");
        }
    }
    for (int l : labels) {
        if (l != 0 && l != 1) {
            throw ArgumentError("labels must be 0 or 1");
        }
    }
}

} // namespace

Confusion confusion(std::span<const double> scores, std::span<const int> labels,
                    double threshold) {
    check_inputs(scores, labels);
    Confusion c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] >= threshold;
        if (labels[i] == 1) {
            predicted ? ++c.tp : ++c.fn;
        } else {
            predicted ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels) {
    check_inputs(scores, labels);
    const auto pos = static_cast<std::size_t>(
        std::count(labels.begin(), labels.end(), 1));
    const std::size_t neg = labels.size() - pos;
    if (pos == 0) {
        throw ArgumentError("ROC needs at least one positive (label 1) sample");
    }
    if (neg == 0) {
        throw ArgumentError("ROC needs at least one negative (label 0) sample");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    constexpr double inf = std::numeric_limits<double>::infinity();
    RocCurve curve;
    curve.points.push_back({0.0, 0.0, inf});
    std::size_t tp = 0;
    std::size_t fp = 0;
    double area2 = 0.0; // twice the area, in units of (1/neg) * (1/pos)
    for (std::size_t i = 0; i < order.size();) {
        const double t = scores[order[i]];
        const std::size_t tp0 = tp;
        const std::size_t fp0 = fp;
        for (; i < order.size() && scores[order[i]] == t; ++i) {
            labels[order[i]] == 1 ? ++tp : ++fp;
        }
        area2 += static_cast<double>((fp - fp0) * (tp + tp0));
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                                static_cast<double>(tp) / static_cast<double>(pos),
                                t});
    }
    curve.points.push_back({1.0, 1.0, -inf});
    curve.auc = area2 / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
    return curve;
}

EvalReport make_report(std::span<const double> scores,
                       std::span<const int> labels, double threshold) {
    EvalReport r;
    r.threshold = threshold;
    r.counts = confusion(scores, labels, threshold);
    const Confusion &c = r.counts;
    r.acc = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    if (c.tp + c.fn > 0) {
        r.sen = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    } else {
        r.sen_undefined = true;
    }
    if (c.tn + c.fp > 0) {
        r.spe = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    } else {
        r.spe_undefined = true;
    }
    if (!r.sen_undefined && !r.spe_undefined) {
        RocCurve roc = roc_auc(scores, labels);
        r.auc = roc.auc;
        r.roc_points = std::move(roc.points);
    } else {
        r.auc_undefined = true;
    }
    return r;
}

void write_roc(std::ostream &out, std::span<const RocPoint> points) {
    char buf[128];
    for (const RocPoint &p : points) {
        std::snprintf(buf, sizeof buf, "%.17g\t%.17g\t%.17g\n", p.fpr, p.tpr,
                      p.threshold);
        out << buf;
    }
}

std::string summary_line(const EvalReport &r) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "AUC=%.3f ACC=%.3f SEN=%.3f SPE=%.3f", r.auc,
                  r.acc, r.sen, r.spe);
    return buf;
}

} // namespace qres
