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


#include "mdrd/data/record.hpp"

#include <chrono>
#include <charconv>
#include <sstream>

#include "mdrd/error.hpp"
#include "mdrd/io/file.hpp"

namespace mdrd::data {

using nlohmann::json;
using nlohmann::ordered_json;

int parse_label(std::string_view label) {
  if (label == "rumor") return 1;
  if (label == "nonrumor") return 0;
  fail<FormatError>("unknown label '", label, "' (expected rumor or nonrumor)");
}

std::string_view label_name(int label) { return label == 1 ? "rumor" : "nonrumor"; }

int collapse_fine_label(std::string_view fine) {
  if (fine == "true_rumor" || fine == "false_rumor" || fine == "unverified") return 1;
  if (fine == "nonrumor") return 0;
  fail<FormatError>("unknown fine_label '", fine, "'");
}

namespace {

const char* const kKnownFields[] = {"id", "text", "domain", "label", "fine_label", "event_id", "metadata"};

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) fail<FormatError>("record: field '", key, "' must be a string");
  return j[key].get<std::string>();
}

std::optional<RawMetadata> read_metadata(const json& j) {
  if (!j.contains("metadata") || !j["metadata"].is_object()) return std::nullopt;
  const json& m = j["metadata"];
  auto count = [&](const char* key) -> std::optional<std::uint64_t> {
    if (!m.contains(key)) return std::nullopt;
    const json& v = m[key];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    return std::nullopt;
  };
  const auto reposts = count("repost_count");
  const auto followers = count("follower_count");
  if (!reposts || !followers || !m.contains("account_created_at") || !m["account_created_at"].is_string()) {
    return std::nullopt;
  }
  return RawMetadata{*reposts, *followers, m["account_created_at"].get<std::string>()};
}

}  // namespace

PostRecord record_from_json(const json& j) {
  if (!j.is_object()) fail<FormatError>("record: expected a JSON object");
  PostRecord r;
  r.id = require_string(j, "id");
  r.text = require_string(j, "text");
  r.domain = require_string(j, "domain");
  r.event_id = j.contains("event_id") && j["event_id"].is_string() ? j["event_id"].get<std::string>() : "";
  if (j.contains("fine_label") && !j["fine_label"].is_null()) {
    if (!j["fine_label"].is_string()) fail<FormatError>("record '", r.id, "': fine_label must be a string");
    r.fine_label = j["fine_label"].get<std::string>();
  }
  if (j.contains("label")) {
    if (!j["label"].is_string()) fail<FormatError>("record '", r.id, "': label must be a string");
    r.label = parse_label(j["label"].get<std::string>());
    if (r.fine_label && collapse_fine_label(*r.fine_label) != r.label) {
      fail<FormatError>("record '", r.id, "': fine_label '", *r.fine_label, "' contradicts label '",
                        j["label"].get<std::string>(), "'");
    }
  } else if (r.fine_label) {
    r.label = collapse_fine_label(*r.fine_label);
  } else {
    fail<FormatError>("record '", r.id, "': neither label nor fine_label present");
  }
  r.metadata = read_metadata(j);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKnownFields) known = known || key == k;
    if (!known) r.extra[key] = ordered_json::parse(value.dump());
  }
  return r;
}

ordered_json to_json(const PostRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["text"] = r.text;
  j["domain"] = r.domain;
  j["label"] = std::string(label_name(r.label));
  if (r.fine_label) j["fine_label"] = *r.fine_label;
  j["event_id"] = r.event_id;
  if (r.metadata) {
    j["metadata"] = {{"repost_count", r.metadata->repost_count},
                     {"follower_count", r.metadata->follower_count},
                     {"account_created_at", r.metadata->account_created_at}};
  }
  for (const auto& [key, value] : r.extra.items()) j[key] = value;
  return j;
}

std::vector<PostRecord> parse_records(std::string_view text) {
  std::vector<PostRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      fail<FormatError>("dataset line ", lineno, ": ", e.what());
    } catch (const FormatError& e) {
      fail<FormatError>("dataset line ", lineno, ": ", e.what());
    }
  }
  return out;
}

std::vector<PostRecord> read_records(const std::filesystem::path& path) {
  return parse_records(io::read_file(path));
}

std::string format_records(const std::vector<PostRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

void write_records(const std::filesystem::path& path, const std::vector<PostRecord>& records) {
  io::write_file_atomic(path, format_records(records));
}

namespace {

std::chrono::sys_days parse_date(std::string_view s) {
  int y = 0;
  unsigned m = 0, d = 0;
  auto bad = [&]() { fail<FormatError>("bad ISO-8601 date '", s, "'"); };
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') bad();
  auto num = [&](std::string_view part, auto& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc() || ptr != part.data() + part.size()) bad();
  };
  num(s.substr(0, 4), y);
  num(s.substr(5, 2), m);
  num(s.substr(8, 2), d);
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) bad();
  return std::chrono::sys_days{ymd};
}

}  // namespace

double account_age_days(std::string_view created_at, std::string_view reference_date) {
  const auto created = parse_date(created_at);
  const auto reference = parse_date(reference_date);
  return static_cast<double>((reference - created).count());
}

}  // namespace mdrd::data
