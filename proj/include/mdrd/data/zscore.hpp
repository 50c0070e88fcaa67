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


#ifndef MDRD_DATA_ZSCORE_HPP_
#define MDRD_DATA_ZSCORE_HPP_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace mdrd::data {

enum class StdKind { kPopulation, kSample };

struct ZScoreStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // >= 0; zero marks a constant feature
  std::string fitted_on;       // split the statistics came from
  StdKind kind = StdKind::kPopulation;

  std::size_t features() const { return mean.size(); }
};

/// Per-feature statistics over `rows` (one vector per sample).
ZScoreStats zscore_fit(std::span<const std::vector<double>> rows, std::string fitted_on = "train",
                       StdKind kind = StdKind::kPopulation);

/// Single-feature convenience form.
ZScoreStats zscore_fit(std::span<const double> values, std::string fitted_on = "train",
                       StdKind kind = StdKind::kPopulation);

/// (x - mean) / stddev per feature; features with stddev 0 map to 0.
std::vector<double> zscore_apply(std::span<const double> x, const ZScoreStats& stats);
double zscore_apply(double x, const ZScoreStats& stats, std::size_t feature = 0);

nlohmann::ordered_json to_json(const ZScoreStats& stats);
ZScoreStats zscore_from_json(const nlohmann::json& j);

}  // namespace mdrd::data

#endif  // MDRD_DATA_ZSCORE_HPP_
