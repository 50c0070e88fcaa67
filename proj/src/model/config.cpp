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

#include "mdrd/model/config.hpp"

#include "mdrd/error.hpp"

namespace mdrd::model {

using nlohmann::json;
using nlohmann::ordered_json;

void MdrdConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) fail<ConfigError>("config: ", name, " must be positive");
  };
  positive(num_experts, "num_experts");
  positive(max_seq_len, "max_seq_len");
  positive(embedding_dim, "embedding_dim");
  positive(batch_size, "batch_size");
  positive(lstm_hidden, "lstm_hidden");
  positive(lstm_layers, "lstm_layers");
  positive(conv_filters, "conv_filters");
  positive(domain_dim, "domain_dim");
  positive(gate_hidden, "gate_hidden");
  positive(embedding_layers, "embedding_layers");
  if (conv_widths.empty()) fail<ConfigError>("config: conv_widths must not be empty");
  for (auto w : conv_widths) positive(w, "conv_widths entry");
  for (auto w : mlp_hidden) positive(w, "mlp_hidden entry");
  if (!(learning_rate >= 0.0)) fail<ConfigError>("config: learning_rate must be >= 0");
  if (!(weight_decay >= 0.0)) fail<ConfigError>("config: weight_decay must be >= 0");
  if (!(mlp_dropout >= 0.0 && mlp_dropout < 1.0)) fail<ConfigError>("config: mlp_dropout must be in [0, 1)");
  if (domains.empty()) fail<ConfigError>("config: at least one domain is required");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : to_json(MdrdConfig{}).items()) out.push_back(k);
    return out;
  }();
  return keys;
}

ordered_json to_json(const MdrdConfig& c) {
  ordered_json j;
  j["num_experts"] = c.num_experts;
  j["learning_rate"] = c.learning_rate;
  j["weight_decay"] = c.weight_decay;
  j["max_seq_len"] = c.max_seq_len;
  j["embedding_dim"] = c.embedding_dim;
  j["batch_size"] = c.batch_size;
  j["max_epochs"] = c.max_epochs;
  j["mlp_dropout"] = c.mlp_dropout;
  j["lstm_hidden"] = c.lstm_hidden;
  j["lstm_layers"] = c.lstm_layers;
  j["conv_widths"] = c.conv_widths;
  j["conv_filters"] = c.conv_filters;
  j["domain_dim"] = c.domain_dim;
  j["gate_hidden"] = c.gate_hidden;
  j["attention_dim"] = c.attention_dim;
  j["mlp_hidden"] = c.mlp_hidden;
  j["metadata_dim"] = c.metadata_dim;
  j["embedding_layers"] = c.embedding_layers;
  j["use_lstm"] = c.use_lstm;
  j["gate_mode"] = c.gate_mode == GateMode::kLearned ? "learned" : "uniform";
  j["variant"] = c.variant;
  j["seed"] = c.seed;
  j["domains"] = c.domains;
  return j;
}

namespace {

template <typename T>
T get_as(const json& value, std::string_view key) {
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
        fail<ConfigError>("config: '", key, "' must be a non-negative integer");
      }
    } else if constexpr (std::is_same_v<T, double>) {
      if (!value.is_number()) fail<ConfigError>("config: '", key, "' must be a number");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) fail<ConfigError>("config: '", key, "' must be a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) fail<ConfigError>("config: '", key, "' must be a string");
    }
    return value.get<T>();
  } catch (const json::exception& e) {
    fail<ConfigError>("config: bad value for '", key, "': ", e.what());
  }
}

}  // namespace

void set_config_value(MdrdConfig& c, std::string_view key, const json& v) {
  if (key == "num_experts") c.num_experts = get_as<std::size_t>(v, key);
  else if (key == "learning_rate") c.learning_rate = get_as<double>(v, key);
  else if (key == "weight_decay") c.weight_decay = get_as<double>(v, key);
  else if (key == "max_seq_len") c.max_seq_len = get_as<std::size_t>(v, key);
  else if (key == "embedding_dim") c.embedding_dim = get_as<std::size_t>(v, key);
  else if (key == "batch_size") c.batch_size = get_as<std::size_t>(v, key);
  else if (key == "max_epochs") c.max_epochs = get_as<std::size_t>(v, key);
  else if (key == "mlp_dropout") c.mlp_dropout = get_as<double>(v, key);
  else if (key == "lstm_hidden") c.lstm_hidden = get_as<std::size_t>(v, key);
  else if (key == "lstm_layers") c.lstm_layers = get_as<std::size_t>(v, key);
  else if (key == "conv_widths") c.conv_widths = get_as<std::vector<std::size_t>>(v, key);
  else if (key == "conv_filters") c.conv_filters = get_as<std::size_t>(v, key);
  else if (key == "domain_dim") c.domain_dim = get_as<std::size_t>(v, key);
  else if (key == "gate_hidden") c.gate_hidden = get_as<std::size_t>(v, key);
  else if (key == "attention_dim") c.attention_dim = get_as<std::size_t>(v, key);
  else if (key == "mlp_hidden") c.mlp_hidden = get_as<std::vector<std::size_t>>(v, key);
  else if (key == "metadata_dim") c.metadata_dim = get_as<std::size_t>(v, key);
  else if (key == "embedding_layers") c.embedding_layers = get_as<std::size_t>(v, key);
  else if (key == "use_lstm") c.use_lstm = get_as<bool>(v, key);
  else if (key == "gate_mode") {
    const auto mode = get_as<std::string>(v, key);
    if (mode == "learned") c.gate_mode = GateMode::kLearned;
    else if (mode == "uniform") c.gate_mode = GateMode::kUniform;
    else fail<ConfigError>("config: gate_mode must be 'learned' or 'uniform', got '", mode, "'");
  }
  else if (key == "variant") c.variant = get_as<std::string>(v, key);
  else if (key == "seed") c.seed = get_as<std::uint64_t>(v, key);
  else if (key == "domains") c.domains = get_as<std::vector<std::string>>(v, key);
  else fail<ConfigError>("config: unknown key '", key, "'");
}

MdrdConfig config_from_json(const json& j) {
  if (!j.is_object()) fail<ConfigError>("config: expected a JSON object");
  MdrdConfig c;
  for (const auto& [key, value] : j.items()) set_config_value(c, key, value);
  return c;
}

}  // namespace mdrd::model
