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


#include "mdrd/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "mdrd/error.hpp"
#include "mdrd/numerics/rng.hpp"

namespace mdrd::data {

std::vector<std::size_t> apportion(std::size_t total, std::span<const double> ratios) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) fail("split: ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) fail("split: ratios sum to ", sum, ", expected 1");
  std::vector<std::size_t> sizes(ratios.size());
  std::vector<double> remainders(ratios.size());
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    const double exact = static_cast<double>(total) * ratios[k];
    // The slack keeps 5 * 0.6 from flooring to 2.
    sizes[k] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainders[k] = exact - static_cast<double>(sizes[k]);
    assigned += sizes[k];
  }
  std::vector<std::size_t> order(ratios.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++sizes[order[i % order.size()]];
  return sizes;
}

namespace {

void deal(std::vector<std::size_t> members, std::span<const double> ratios, num::SeededRng rng,
          std::array<std::vector<std::size_t>*, 3> parts) {
  rng.shuffle(std::span<std::size_t>(members));
  const auto sizes = apportion(members.size(), ratios);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (!parts[k]) continue;
    parts[k]->insert(parts[k]->end(), members.begin() + pos, members.begin() + pos + sizes[k]);
    pos += sizes[k];
  }
}

// Groups indices by domain name; std::map keeps the processing order fixed.
std::map<std::string, std::vector<std::size_t>> by_domain(std::span<const PostRecord> records,
                                                          const std::vector<std::size_t>& indices) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i : indices) groups[records[i].domain].push_back(i);
  return groups;
}

void partition(std::span<const PostRecord> records, const std::vector<std::size_t>& indices,
               std::span<const double> ratios, std::uint64_t seed, bool stratify,
               std::array<std::vector<std::size_t>*, 3> parts) {
  const num::SeededRng root(seed);
  if (!stratify) {
    deal(indices, ratios, root.derive(0), parts);
  } else {
    std::uint64_t stream = 1;
    for (auto& [name, members] : by_domain(records, indices)) deal(members, ratios, root.derive(stream++), parts);
  }
  for (auto* part : parts) {
    if (part) std::sort(part->begin(), part->end());
  }
}

}  // namespace

SplitIndices split_holdout(std::span<const PostRecord> records, std::array<double, 3> ratios, std::uint64_t seed,
                           bool stratify_by_domain) {
  apportion(0, ratios);  // validates the ratios first
  if (records.size() < 5) fail("split_holdout: at least 5 records are required, got ", records.size());
  std::vector<std::size_t> all(records.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  SplitIndices out;
  partition(records, all, ratios, seed, stratify_by_domain, {&out.train, &out.val, &out.test});
  return out;
}

SplitIndices split_leave_event_out(std::span<const PostRecord> records, const std::string& event_id,
                                   std::uint64_t seed, bool stratify_by_domain) {
  SplitIndices out;
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (records[i].event_id == event_id ? out.test : pool).push_back(i);
  }
  if (out.test.empty()) fail("split_leave_event_out: unknown event id '", event_id, "'");
  if (pool.empty()) fail("split_leave_event_out: empty training pool (event '", event_id, "' covers every record)");
  const std::array<double, 3> ratios{0.75, 0.25, 0.0};
  partition(records, pool, ratios, seed, stratify_by_domain, {&out.train, &out.val, nullptr});
  return out;
}

nlohmann::ordered_json split_to_json(const SplitIndices& split, std::span<const PostRecord> records) {
  auto ids = [&](const std::vector<std::size_t>& part) {
    std::vector<std::string> out;
    for (std::size_t i : part) out.push_back(records[i].id);
    return out;
  };
  nlohmann::ordered_json j;
  j["train"] = ids(split.train);
  j["val"] = ids(split.val);
  j["test"] = ids(split.test);
  return j;
}

SplitIndices split_from_json(const nlohmann::json& j, std::span<const PostRecord> records) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!index.emplace(records[i].id, i).second) fail("split: duplicate record id '", records[i].id, "'");
  }
  std::unordered_map<std::string, int> used;
  auto resolve = [&](const char* key) {
    std::vector<std::size_t> out;
    if (!j.contains(key) || !j[key].is_array()) fail<FormatError>("split file: '", key, "' must be a list of ids");
    for (const auto& v : j[key]) {
      const auto id = v.get<std::string>();
      const auto it = index.find(id);
      if (it == index.end()) fail("split file: id '", id, "' not in the dataset");
      if (used[id]++) fail("split file: id '", id, "' appears more than once");
      out.push_back(it->second);
    }
    return out;
  };
  SplitIndices s;
  s.train = resolve("train");
  s.val = resolve("val");
  s.test = resolve("test");
  return s;
}

}  // namespace mdrd::data
