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

#include "mdrd/eval/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mdrd/error.hpp"

namespace mdrd::eval {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassScores scores(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScores s;
  s.precision = ratio(tp, tp + fp);
  s.recall = ratio(tp, tp + fn);
  s.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  s.support = tp + fn;
  return s;
}

}  // namespace

ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    fail<DimensionError>("metrics: ", predictions.size(), " predictions for ", labels.size(), " labels");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int p = predictions[i], y = labels[i];
    if ((p != 0 && p != 1) || (y != 0 && y != 1)) fail("metrics: labels must be 0 or 1");
    if (p == 1 && y == 1) ++c.tp;
    else if (p == 1) ++c.fp;
    else if (y == 1) ++c.fn;
    else ++c.tn;
  }
  return c;
}

MetricsReport metrics_from_counts(const ConfusionCounts& c) {
  if (c.total() == 0) fail("metrics: empty input");
  MetricsReport r;
  r.counts = c;
  r.count = c.total();
  r.accuracy = ratio(c.tp + c.tn, c.total());
  r.rumor = scores(c.tp, c.fp, c.fn);
  r.nonrumor = scores(c.tn, c.fn, c.fp);
  r.macro_f1 = (r.rumor.f1 + r.nonrumor.f1) / 2.0;
  return r;
}

MetricsReport classification_metrics(std::span<const int> predictions, std::span<const int> labels) {
  if (labels.empty() && predictions.empty()) fail("metrics: empty input");
  return metrics_from_counts(confusion(predictions, labels));
}

std::map<std::string, MetricsReport> per_domain_metrics(std::span<const int> predictions,
                                                       std::span<const int> labels,
                                                       std::span<const std::string> domains) {
  if (predictions.size() != labels.size() || labels.size() != domains.size()) {
    fail<DimensionError>("per_domain_metrics: misaligned inputs (", predictions.size(), ", ", labels.size(), ", ",
                         domains.size(), ")");
  }
  std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& [p, y] = groups[domains[i]];
    p.push_back(predictions[i]);
    y.push_back(labels[i]);
  }
  std::map<std::string, MetricsReport> out;
  for (const auto& [name, group] : groups) out.emplace(name, classification_metrics(group.first, group.second));
  return out;
}

namespace {

nlohmann::ordered_json class_json(const ClassScores& s) {
  nlohmann::ordered_json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  j["support"] = s.support;
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["count"] = r.count;
  j["accuracy"] = r.accuracy;
  j["macro_f1"] = r.macro_f1;
  j["rumor"] = class_json(r.rumor);
  j["nonrumor"] = class_json(r.nonrumor);
  j["confusion"] = {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"fn", r.counts.fn}, {"tn", r.counts.tn}};
  return j;
}

nlohmann::ordered_json to_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["overall"] = to_json(r.overall);
  nlohmann::ordered_json domains = nlohmann::ordered_json::object();
  for (const auto& [name, rep] : r.per_domain) domains[name] = to_json(rep);
  j["per_domain"] = std::move(domains);
  return j;
}

std::string render_domain_table(const std::map<std::string, MetricsReport>& reports) {
  std::ostringstream os;
  os << "Domain\tF1\tACC\n";
  char buf[64];
  for (const auto& [name, r] : reports) {
    std::snprintf(buf, sizeof(buf), "\t%.2f\t%.2f\n", 100.0 * r.macro_f1, 100.0 * r.accuracy);
    os << name << buf;
  }
  return os.str();
}

std::vector<std::pair<std::string, double>> flatten(const MetricsReport& r) {
  return {{"accuracy", r.accuracy},
          {"macro_f1", r.macro_f1},
          {"rumor_precision", r.rumor.precision},
          {"rumor_recall", r.rumor.recall},
          {"rumor_f1", r.rumor.f1},
          {"nonrumor_precision", r.nonrumor.precision},
          {"nonrumor_recall", r.nonrumor.recall},
          {"nonrumor_f1", r.nonrumor.f1}};
}

namespace {

AggregateReport aggregate(const std::vector<std::vector<std::pair<std::string, double>>>& runs) {
  if (runs.empty()) fail("aggregate_runs: no reports");
  AggregateReport out;
  out.runs = runs.size();
  const auto& first = runs.front();
  for (const auto& run : runs) {
    if (run.size() != first.size()) fail("aggregate_runs: heterogeneous reports");
    for (std::size_t k = 0; k < run.size(); ++k) {
      if (run[k].first != first[k].first) fail("aggregate_runs: heterogeneous reports ('", run[k].first, "' vs '", first[k].first, "')");
    }
  }
  const double n = static_cast<double>(runs.size());
  for (std::size_t k = 0; k < first.size(); ++k) {
    double sum = 0.0;
    for (const auto& run : runs) sum += run[k].second;
    double mean = sum / n;
    // Summing n equal values can drift by an ulp; keep identical runs exact.
    bool identical = true;
    for (const auto& run : runs) identical &= run[k].second == first[k].second;
    if (identical) mean = first[k].second;
    double sq = 0.0;
    for (const auto& run : runs) sq += (run[k].second - mean) * (run[k].second - mean);
    out.keys.push_back(first[k].first);
    out.mean[first[k].first] = mean;
    out.stddev[first[k].first] = std::sqrt(sq / n);
  }
  return out;
}

}  // namespace

AggregateReport aggregate_runs(std::span<const MetricsReport> reports) {
  std::vector<std::vector<std::pair<std::string, double>>> runs;
  for (const auto& r : reports) runs.push_back(flatten(r));
  return aggregate(runs);
}

AggregateReport aggregate_runs(std::span<const EvaluationReport> reports) {
  std::vector<std::vector<std::pair<std::string, double>>> runs;
  for (const auto& r : reports) {
    auto flat = flatten(r.overall);
    for (const auto& [domain, rep] : r.per_domain) {
      for (auto& [k, v] : flatten(rep)) flat.emplace_back(domain + "/" + k, v);
    }
    runs.push_back(std::move(flat));
  }
  return aggregate(runs);
}

nlohmann::ordered_json to_json(const AggregateReport& r) {
  nlohmann::ordered_json j;
  j["runs"] = r.runs;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& k : r.keys) metrics[k] = {{"mean", r.mean.at(k)}, {"std", r.stddev.at(k)}};
  j["metrics"] = std::move(metrics);
  return j;
}

}  // namespace mdrd::eval
