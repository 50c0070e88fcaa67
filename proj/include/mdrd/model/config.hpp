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

#ifndef MDRD_MODEL_CONFIG_HPP_
#define MDRD_MODEL_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mdrd::model {

enum class GateMode { kLearned, kUniform };

/// Model and optimizer hyperparameters. Defaults follow the published
/// setup where it specifies a value (experts, learning rate, weight decay,
/// sequence length, embedding width, batch size, epochs, MLP dropout);
/// the remaining widths are local choices.
struct MdrdConfig {
  std::size_t num_experts = 7;
  double learning_rate = 5e-4;
  double weight_decay = 5e-5;
  std::size_t max_seq_len = 170;
  std::size_t embedding_dim = 768;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 50;
  double mlp_dropout = 0.4;

  std::size_t lstm_hidden = 64;
  std::size_t lstm_layers = 2;
  std::vector<std::size_t> conv_widths = {2, 3, 4};
  std::size_t conv_filters = 32;
  std::size_t domain_dim = 32;
  std::size_t gate_hidden = 64;
  std::size_t attention_dim = 0;  // 0 = embedding_dim
  std::vector<std::size_t> mlp_hidden = {64};
  std::size_t metadata_dim = 3;
  std::size_t embedding_layers = 4;  // hidden layers averaged per token

  bool use_lstm = true;
  GateMode gate_mode = GateMode::kLearned;
  std::string variant = "full";

  std::uint64_t seed = 42;
  std::vector<std::string> domains;  // index = domain id

  std::size_t num_domains() const { return domains.size(); }
  std::size_t resolved_attention_dim() const { return attention_dim ? attention_dim : embedding_dim; }

  /// Throws ConfigError on non-positive widths or out-of-range rates.
  void validate() const;
};

/// Fixed key order; every field is written.
nlohmann::ordered_json to_json(const MdrdConfig& config);

/// Starts from the defaults and overrides the keys present; unknown keys
/// and mistyped values throw ConfigError.
MdrdConfig config_from_json(const nlohmann::json& j);

/// Applies one "key" = value override, rejecting unknown keys.
void set_config_value(MdrdConfig& config, std::string_view key, const nlohmann::json& value);

/// Names of every config key, in serialization order.
const std::vector<std::string>& config_keys();

}  // namespace mdrd::model

#endif  // MDRD_MODEL_CONFIG_HPP_
