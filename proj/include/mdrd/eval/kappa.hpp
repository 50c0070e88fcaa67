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


#ifndef MDRD_EVAL_KAPPA_HPP_
#define MDRD_EVAL_KAPPA_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mdrd::eval {

/// counts[i][j] = number of annotators who put item i in category j.
/// Every row must sum to the same n >= 2.
struct RatingsMatrix {
  std::vector<std::vector<std::size_t>> counts;

  std::size_t items() const { return counts.size(); }
  std::size_t categories() const { return counts.empty() ? 0 : counts.front().size(); }
  /// Raters per item; validates the constant-n invariant.
  std::size_t raters() const;
};

double fleiss_kappa(const RatingsMatrix& ratings);

/// Agreement band for a kappa value; fails for kappa > 1 or NaN.
std::string kappa_band(double kappa);

/// One item per line: comma- or whitespace-separated category counts.
/// Blank lines and lines starting with '#' are skipped.
RatingsMatrix parse_ratings(std::string_view text);

}  // namespace mdrd::eval

#endif  // MDRD_EVAL_KAPPA_HPP_
