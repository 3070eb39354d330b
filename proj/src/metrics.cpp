// Copyright 2026 The qfusion Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfusion/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qfusion/common.hpp"

namespace qfusion::data {
namespace {

double mean(const std::vector<double> &v) {
    return std::accumulate(v.begin(), v.end(), 0.0) /
           static_cast<double>(v.size());
}

// Pearson correlation; throws if either side has zero variance.
double pearson_correlation(const std::vector<double> &a,
                           const std::vector<double> &b) {
    const double ma = mean(a);
    const double mb = mean(b);
    double saa = 0.0;
    double sbb = 0.0;
    double sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    detail::require(saa > 0.0 && sbb > 0.0,
                    "correlation undefined for a constant vector");
    return sab / std::sqrt(saa * sbb);
}

} // namespace

std::vector<double> average_ranks(const std::vector<double> &values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&values](std::size_t i,
                                                    std::size_t j) {
        return values[i] < values[j];
    });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // Ties share the average of the 1-based positions they occupy.
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) /
                               2.0 +
                           1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

MetricReport evaluate(const std::vector<double> &predictions,
                      const std::vector<double> &labels) {
    detail::require(predictions.size() == labels.size(),
                    "prediction and label counts differ");
    detail::require(!labels.empty(), "cannot evaluate an empty set");

    const double n = static_cast<double>(labels.size());
    double sq = 0.0;
    double abs = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double d = predictions[i] - labels[i];
        sq += d * d;
        abs += std::abs(d);
    }
    const double label_mean = mean(labels);
    double ss_tot = 0.0;
    for (double y : labels) {
        ss_tot += (y - label_mean) * (y - label_mean);
    }
    detail::require(ss_tot > 0.0, "metrics undefined for constant labels");

    MetricReport report;
    report.rmse = std::sqrt(sq / n);
    report.mae = abs / n;
    report.r2 = 1.0 - sq / ss_tot;
    report.pearson = pearson_correlation(predictions, labels);
    report.spearman = pearson_correlation(average_ranks(predictions),
                                          average_ranks(labels));
    return report;
}

std::string format_report(const MetricReport &report) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    os << "rmse=" << report.rmse << " mae=" << report.mae
       << " r2=" << report.r2 << " pearson=" << report.pearson
       << " spearman=" << report.spearman;
    return os.str();
}

} // namespace qfusion::data
