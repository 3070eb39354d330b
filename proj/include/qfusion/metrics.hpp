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

/**
 * @file metrics.hpp
 * The five regression evaluation metrics: RMSE, MAE, R^2, Pearson and
 * Spearman correlation (fractional ranks with average-rank ties).
 */

#pragma once

#include <string>
#include <vector>

namespace qfusion::data {

struct MetricReport {
    double rmse = 0.0;
    double mae = 0.0;
    double r2 = 0.0;
    double pearson = 0.0;
    double spearman = 0.0;

    double mse() const { return rmse * rmse; }
};

/**
 * Computes all five metrics. Throws if the vectors differ in length, are
 * empty, or either side is constant (correlations would be undefined; this
 * is an explicit error, never a silent zero).
 */
MetricReport evaluate(const std::vector<double> &predictions,
                      const std::vector<double> &labels);

/// Average-rank (tie-aware) fractional ranks, 1-based.
std::vector<double> average_ranks(const std::vector<double> &values);

/// Aligned human-readable rendering of a report.
std::string format_report(const MetricReport &report);

} // namespace qfusion::data
