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


#ifndef MDRD_DATA_RECORD_HPP_
#define MDRD_DATA_RECORD_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mdrd::data {

struct RawMetadata {
  std::uint64_t repost_count = 0;
  std::uint64_t follower_count = 0;
  std::string account_created_at;  // ISO-8601 date, YYYY-MM-DD[...]
};

/// One dataset row. Fields not listed here survive a read/write round trip
/// through `extra`.
struct PostRecord {
  std::string id;
  std::string text;
  std::string domain;
  int label = 0;  // 1 = rumor
  std::optional<std::string> fine_label;
  std::string event_id;
  std::optional<RawMetadata> metadata;  // absent or incomplete -> nullopt
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

/// "rumor" -> 1, "nonrumor" -> 0.
int parse_label(std::string_view label);
std::string_view label_name(int label);

/// true_rumor, false_rumor and unverified collapse to rumor.
int collapse_fine_label(std::string_view fine_label);

PostRecord record_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const PostRecord& record);

/// JSON Lines; blank lines are skipped. Errors carry the line number.
std::vector<PostRecord> parse_records(std::string_view text);
std::vector<PostRecord> read_records(const std::filesystem::path& path);
std::string format_records(const std::vector<PostRecord>& records);
void write_records(const std::filesystem::path& path, const std::vector<PostRecord>& records);

/// Days from the account creation date to `reference_date` (both ISO-8601).
double account_age_days(std::string_view created_at, std::string_view reference_date);

}  // namespace mdrd::data

#endif  // MDRD_DATA_RECORD_HPP_
