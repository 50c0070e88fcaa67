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


#include "mdrd/data/zscore.hpp"

#include <cmath>

#include "mdrd/error.hpp"

namespace mdrd::data {

ZScoreStats zscore_fit(std::span<const std::vector<double>> rows, std::string fitted_on, StdKind kind) {
  if (rows.empty()) fail("zscore_fit: cannot fit on an empty set");
  const std::size_t m = rows.front().size();
  const double n = static_cast<double>(rows.size());
  if (kind == StdKind::kSample && rows.size() < 2) fail("zscore_fit: sample deviation needs at least 2 values");
  ZScoreStats s;
  s.fitted_on = std::move(fitted_on);
  s.kind = kind;
  s.mean.assign(m, 0.0);
  s.stddev.assign(m, 0.0);
  for (const auto& row : rows) {
    if (row.size() != m) fail<DimensionError>("zscore_fit: rows have ", row.size(), " and ", m, " features");
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(row[j])) fail("zscore_fit: non-finite value in feature ", j);
      s.mean[j] += row[j];
    }
  }
  for (double& mu : s.mean) mu /= n;
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < m; ++j) s.stddev[j] += (row[j] - s.mean[j]) * (row[j] - s.mean[j]);
  }
  const double denom = kind == StdKind::kPopulation ? n : n - 1.0;
  for (double& sd : s.stddev) sd = std::sqrt(sd / denom);
  return s;
}

ZScoreStats zscore_fit(std::span<const double> values, std::string fitted_on, StdKind kind) {
  std::vector<std::vector<double>> rows;
  rows.reserve(values.size());
  for (double v : values) rows.push_back({v});
  return zscore_fit(rows, std::move(fitted_on), kind);
}

double zscore_apply(double x, const ZScoreStats& stats, std::size_t feature) {
  if (feature >= stats.features()) fail<DimensionError>("zscore_apply: feature ", feature, " not fitted");
  const double sd = stats.stddev[feature];
  return sd == 0.0 ? 0.0 : (x - stats.mean[feature]) / sd;
}

std::vector<double> zscore_apply(std::span<const double> x, const ZScoreStats& stats) {
  if (x.size() != stats.features()) {
    fail<DimensionError>("zscore_apply: ", x.size(), " features given, ", stats.features(), " fitted");
  }
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = zscore_apply(x[j], stats, j);
  return out;
}

nlohmann::ordered_json to_json(const ZScoreStats& s) {
  nlohmann::ordered_json j;
  j["mean"] = s.mean;
  j["stddev"] = s.stddev;
  j["fitted_on"] = s.fitted_on;
  j["kind"] = s.kind == StdKind::kPopulation ? "population" : "sample";
  return j;
}

ZScoreStats zscore_from_json(const nlohmann::json& j) {
  try {
    ZScoreStats s;
    s.mean = j.at("mean").get<std::vector<double>>();
    s.stddev = j.at("stddev").get<std::vector<double>>();
    s.fitted_on = j.at("fitted_on").get<std::string>();
    s.kind = j.at("kind").get<std::string>() == "sample" ? StdKind::kSample : StdKind::kPopulation;
    if (s.mean.size() != s.stddev.size()) fail<FormatError>("zscore stats: mean/stddev length mismatch");
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail<FormatError>("zscore stats: ", e.what());
  }
}

}  // namespace mdrd::data
