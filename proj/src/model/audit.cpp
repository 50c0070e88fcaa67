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


#include "mdrd/model/audit.hpp"

#include "mdrd/model/model.hpp"

namespace mdrd::model {

MdrdConfig tiny_config(std::uint64_t seed) {
  MdrdConfig c;
  c.num_experts = 2;
  c.embedding_dim = 8;
  c.lstm_hidden = 6;
  c.lstm_layers = 2;
  c.conv_widths = {2, 3};
  c.conv_filters = 2;
  c.metadata_dim = 3;
  c.domain_dim = 4;
  c.gate_hidden = 8;
  c.mlp_hidden = {8};
  c.mlp_dropout = 0.0;
  c.batch_size = 4;
  c.seed = seed;
  c.domains = {"politics", "health", "sports"};
  return c;
}

data::Batch tiny_batch(const MdrdConfig& config, std::uint64_t seed) {
  num::SeededRng rng(seed);
  const std::size_t lengths[] = {5, 3, 1, 4};
  std::vector<data::EmbeddedPost> posts;
  for (std::size_t i = 0; i < 4; ++i) {
    data::EmbeddedPost p;
    p.id = "tiny" + std::to_string(i);
    std::vector<double> values(lengths[i] * config.embedding_dim);
    for (double& v : values) v = rng.uniform(-1.0, 1.0);
    p.tokens = num::Tensor({lengths[i], config.embedding_dim}, std::move(values));
    p.domain = i % config.num_domains();
    for (std::size_t j = 0; j < config.metadata_dim; ++j) p.metadata.push_back(rng.normal());
    p.label = static_cast<int>(i % 2);
    posts.push_back(std::move(p));
  }
  return data::collate(std::span<const data::EmbeddedPost>(posts), config.max_seq_len);
}

num::GradCheckResult gradcheck_tiny_model(std::uint64_t seed, double eps) {
  const MdrdConfig config = tiny_config(seed);
  MdrdModel model(config);
  const data::Batch batch = tiny_batch(config, seed + 1);
  auto params = model.parameters();
  num::SeededRng jitter(num::derive_seed(seed, 77));
  for (num::Parameter* p : params) {
    for (double& v : p->value.data()) v += jitter.uniform(-0.1, 0.1);
  }
  return num::grad_check(
      [&](num::Graph& g) {
        const ForwardOutput out = model.forward(g, batch, Mode::kEval, nullptr);
        return bce_loss(out.probs, batch.labels);
      },
      params, eps);
}

}  // namespace mdrd::model
