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


#include "mdrd/eval/kappa.hpp"

#include <cmath>
#include <sstream>

#include "mdrd/error.hpp"

namespace mdrd::eval {

std::size_t RatingsMatrix::raters() const {
  if (counts.empty()) fail("fleiss_kappa: no items");
  const std::size_t c = counts.front().size();
  if (c == 0) fail("fleiss_kappa: no categories");
  std::size_t n = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() != c) {
      fail<DimensionError>("fleiss_kappa: item ", i, " has ", counts[i].size(), " categories, expected ", c);
    }
    std::size_t sum = 0;
    for (auto v : counts[i]) sum += v;
    if (i == 0) n = sum;
    else if (sum != n) fail("fleiss_kappa: item ", i, " has ", sum, " ratings but item 0 has ", n);
  }
  if (n < 2) fail("fleiss_kappa: at least 2 raters per item are required, got ", n);
  return n;
}

double fleiss_kappa(const RatingsMatrix& ratings) {
  const std::size_t n = ratings.raters();
  const std::size_t items = ratings.items();
  const std::size_t cats = ratings.categories();
  const double dn = static_cast<double>(n);

  double p_bar = 0.0;
  std::vector<double> column(cats, 0.0);
  for (const auto& row : ratings.counts) {
    double sq = 0.0;
    for (std::size_t j = 0; j < cats; ++j) {
      const double v = static_cast<double>(row[j]);
      sq += v * v;
      column[j] += v;
    }
    p_bar += (sq - dn) / (dn * (dn - 1.0));
  }
  p_bar /= static_cast<double>(items);

  double p_e = 0.0;
  const double total = static_cast<double>(items) * dn;
  for (double col : column) p_e += (col / total) * (col / total);
  if (p_e >= 1.0) fail("fleiss_kappa: agreement undefined (every rating falls in one category)");
  return (p_bar - p_e) / (1.0 - p_e);
}

std::string kappa_band(double kappa) {
  if (std::isnan(kappa)) fail("kappa_band: kappa is NaN");
  if (kappa > 1.0) fail("kappa_band: kappa ", kappa, " exceeds 1");
  if (kappa < 0.0) return "Weak agreement";
  if (kappa <= 0.20) return "Partial agreement";
  if (kappa <= 0.40) return "Fair agreement";
  if (kappa <= 0.60) return "Moderate agreement";
  if (kappa <= 0.80) return "Substantial agreement";
  return "Almost perfect agreement";
}

RatingsMatrix parse_ratings(std::string_view text) {
  RatingsMatrix m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& ch : line) {
      if (ch == ',' || ch == '\t' || ch == '\r') ch = ' ';
    }
    const auto first = line.find_first_not_of(' ');
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::size_t> row;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      long long v = -1;
      try {
        v = std::stoll(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || v < 0) fail<FormatError>("ratings line ", lineno, ": bad count '", token, "'");
      row.push_back(static_cast<std::size_t>(v));
    }
    m.counts.push_back(std::move(row));
  }
  if (m.counts.empty()) fail<FormatError>("ratings: no items");
  return m;
}

}  // namespace mdrd::eval
