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


#include "mdrd/cli/run_config.hpp"

#include <algorithm>

#include "mdrd/error.hpp"
#include "mdrd/io/file.hpp"

namespace mdrd::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

fs::path RunConfig::dataset_path() const {
  fs::path p(data);
  std::error_code ec;
  if (fs::is_directory(p, ec)) return p / "data.jsonl";
  return p;
}

fs::path RunConfig::embeddings_path() const {
  if (!embeddings.empty()) return embeddings;
  return dataset_path().parent_path() / "embeddings.bin";
}

const std::vector<std::string>& run_keys() {
  static const std::vector<std::string> keys = {"data",  "embeddings", "split_file",     "ratios",    "leave_out_event",
                                                "stratify", "seeds",   "out_dir",        "reference_date",
                                                "emoji_map", "char_map"};
  return keys;
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j = model::to_json(c.model);
  j["data"] = c.data;
  j["embeddings"] = c.embeddings;
  j["split_file"] = c.split_file;
  j["ratios"] = c.ratios;
  j["leave_out_event"] = c.leave_out_event;
  j["stratify"] = c.stratify;
  j["seeds"] = c.seeds;
  j["out_dir"] = c.out_dir;
  j["reference_date"] = c.reference_date;
  j["emoji_map"] = c.emoji_map;
  j["char_map"] = c.char_map;
  return j;
}

namespace {

template <typename T>
T as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    fail<ConfigError>("config: bad value for '", key, "': ", v.dump());
  }
}

}  // namespace

void set_run_value(RunConfig& c, const std::string& key, const json& v) {
  if (key == "data") c.data = as<std::string>(v, key);
  else if (key == "embeddings") c.embeddings = as<std::string>(v, key);
  else if (key == "split_file") c.split_file = as<std::string>(v, key);
  else if (key == "ratios") {
    const auto r = as<std::vector<double>>(v, key);
    if (r.size() != 3) fail<ConfigError>("config: 'ratios' needs three values (train, val, test)");
    std::copy(r.begin(), r.end(), c.ratios.begin());
  } else if (key == "leave_out_event") c.leave_out_event = as<std::string>(v, key);
  else if (key == "stratify") c.stratify = as<bool>(v, key);
  else if (key == "seeds") {
    if (!v.is_number_integer() || v.get<long long>() < 1) fail<ConfigError>("config: 'seeds' must be a positive integer");
    c.seeds = v.get<std::size_t>();
  } else if (key == "out_dir") c.out_dir = as<std::string>(v, key);
  else if (key == "reference_date") c.reference_date = as<std::string>(v, key);
  else if (key == "emoji_map") c.emoji_map = as<std::map<std::string, std::string>>(v, key);
  else if (key == "char_map") c.char_map = as<std::map<std::string, std::string>>(v, key);
  else model::set_config_value(c.model, key, v);
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) fail<ConfigError>("config: expected a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) set_run_value(c, key, value);
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) fail<ConfigError>("config file '", path.string(), "' not found");
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::exception& e) {
    fail<ConfigError>("config file '", path.string(), "': ", e.what());
  }
  return run_config_from_json(j);
}

void apply_override(RunConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) fail<ConfigError>("override '", assignment, "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  set_run_value(c, key, value);
}

}  // namespace mdrd::cli
