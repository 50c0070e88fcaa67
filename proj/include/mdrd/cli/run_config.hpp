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


#ifndef MDRD_CLI_RUN_CONFIG_HPP_
#define MDRD_CLI_RUN_CONFIG_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdrd/model/config.hpp"

namespace mdrd::cli {

/// Model hyperparameters plus everything a run needs to locate its inputs.
/// Loaded from one flat JSON object; unknown keys are rejected.
struct RunConfig {
  model::MdrdConfig model;

  std::string data;        // dataset JSONL, or a directory holding data.jsonl
  std::string embeddings;  // defaults to embeddings.bin next to the dataset
  std::string split_file;  // fixed id lists; otherwise splits are drawn per run
  std::array<double, 3> ratios = {0.6, 0.2, 0.2};
  std::string leave_out_event;
  bool stratify = true;
  std::size_t seeds = 10;
  std::string out_dir = "mdrd-out";
  std::string reference_date = "2024-01-01";
  std::map<std::string, std::string> emoji_map;
  std::map<std::string, std::string> char_map;

  std::filesystem::path dataset_path() const;
  std::filesystem::path embeddings_path() const;
};

/// Run-level keys, in serialization order.
const std::vector<std::string>& run_keys();

nlohmann::ordered_json to_json(const RunConfig& config);

/// Applies one key; model keys go to the model config.
void set_run_value(RunConfig& config, const std::string& key, const nlohmann::json& value);

RunConfig run_config_from_json(const nlohmann::json& j);

/// Throws ConfigError when the file is missing or malformed.
RunConfig load_run_config(const std::filesystem::path& path);

/// "key=value" override; the value is parsed as JSON, falling back to a string.
void apply_override(RunConfig& config, const std::string& assignment);

}  // namespace mdrd::cli

#endif  // MDRD_CLI_RUN_CONFIG_HPP_
