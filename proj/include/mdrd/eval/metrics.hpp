// Copyright 2026 The MDRD Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MDRD_EVAL_METRICS_HPP_
#define MDRD_EVAL_METRICS_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace mdrd::eval {

/// Rumor (label 1) is the positive class.
struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t total() const { return tp + fp + fn + tn; }
};

ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> labels);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  ClassScores rumor;
  ClassScores nonrumor;
  double macro_f1 = 0.0;  // headline F1
  std::size_t count = 0;
  ConfusionCounts counts;
};

/// Accuracy, per-class precision/recall/F1 (0/0 counts as 0) and macro-F1.
MetricsReport classification_metrics(std::span<const int> predictions, std::span<const int> labels);
MetricsReport metrics_from_counts(const ConfusionCounts& counts);

/// One report per domain present in `domains`, keyed by domain name.
std::map<std::string, MetricsReport> per_domain_metrics(std::span<const int> predictions,
                                                       std::span<const int> labels,
                                                       std::span<const std::string> domains);

nlohmann::ordered_json to_json(const MetricsReport& report);

/// Domain / F1 / ACC table with percentages to two decimals.
std::string render_domain_table(const std::map<std::string, MetricsReport>& reports);

/// Overall report plus the per-domain breakdown of one evaluation.
struct EvaluationReport {
  MetricsReport overall;
  std::map<std::string, MetricsReport> per_domain;
};

nlohmann::ordered_json to_json(const EvaluationReport& report);

/// Mean and population standard deviation of every metric over runs.
/// Keys are metric names ("accuracy", "macro_f1", ...) and, for per-domain
/// breakdowns, "<domain>/<metric>".
struct AggregateReport {
  std::size_t runs = 0;
  std::vector<std::string> keys;  // report order
  std::map<std::string, double> mean;
  std::map<std::string, double> stddev;
};

/// Scalar metrics of a report in fixed order.
std::vector<std::pair<std::string, double>> flatten(const MetricsReport& report);

AggregateReport aggregate_runs(std::span<const MetricsReport> reports);

/// Fails when runs disagree on the set of domains.
AggregateReport aggregate_runs(std::span<const EvaluationReport> reports);

nlohmann::ordered_json to_json(const AggregateReport& report);

}  // namespace mdrd::eval

#endif  // MDRD_EVAL_METRICS_HPP_
