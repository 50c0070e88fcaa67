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


#ifndef MDRD_DATA_SPLIT_HPP_
#define MDRD_DATA_SPLIT_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdrd/data/record.hpp"

namespace mdrd::data {

/// Indices into the record list handed to the splitter.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Sizes from ratios by largest-remainder rounding; ties go to the earlier part.
std::vector<std::size_t> apportion(std::size_t total, std::span<const double> ratios);

/// Seeded random partition. With `stratify_by_domain`, every domain is split
/// on its own so per-domain proportions follow the ratios.
SplitIndices split_holdout(std::span<const PostRecord> records, std::array<double, 3> ratios, std::uint64_t seed,
                           bool stratify_by_domain = true);

/// Every record of `event_id` goes to test; the remaining pool is split 3:1
/// into train and validation.
SplitIndices split_leave_event_out(std::span<const PostRecord> records, const std::string& event_id,
                                   std::uint64_t seed, bool stratify_by_domain = true);

/// {"train": [...ids], "val": [...], "test": [...]}.
nlohmann::ordered_json split_to_json(const SplitIndices& split, std::span<const PostRecord> records);

/// Resolves id lists back to indices; fails on unknown or repeated ids.
SplitIndices split_from_json(const nlohmann::json& j, std::span<const PostRecord> records);

}  // namespace mdrd::data

#endif  // MDRD_DATA_SPLIT_HPP_
