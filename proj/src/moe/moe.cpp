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

#include "mdrd/moe/moe.hpp"

#include "mdrd/error.hpp"
#include "mdrd/numerics/ops.hpp"

namespace mdrd::moe {

DomainEmbeddingTable::DomainEmbeddingTable(const std::string& prefix, std::size_t num_domains_in,
                                           std::size_t dim_in, SeededRng& rng)
    : num_domains(num_domains_in),
      dim(dim_in),
      table(prefix + ".table", layers::uniform_tensor({num_domains_in, dim_in}, 0.05, rng)) {}

void DomainEmbeddingTable::collect(std::vector<Parameter*>& out) { out.push_back(&table); }

Var domain_embedding(Graph& g, std::span<const std::size_t> domains, DomainEmbeddingTable& table) {
  for (std::size_t d : domains) {
    if (d >= table.num_domains) {
      fail<DimensionError>("domain id ", d, " out of range: table has K = ", table.num_domains, " domains");
    }
  }
  return num::gather_rows(g.parameter(table.table), domains);
}

ExpertNetwork::ExpertNetwork(std::size_t index_in, std::size_t token_dim, std::size_t hidden,
                             std::size_t lstm_layers, std::vector<std::size_t> conv_widths,
                             std::size_t conv_filters, std::size_t metadata_dim_in, bool use_lstm, SeededRng& rng)
    : index(index_in),
      lstm(use_lstm ? std::optional<layers::BiLstmStack>(std::in_place, "expert" + std::to_string(index_in) + ".lstm",
                                                         token_dim, hidden, lstm_layers, rng)
                    : std::nullopt),
      conv("expert" + std::to_string(index_in) + ".conv", use_lstm ? 2 * hidden : token_dim, std::move(conv_widths),
           conv_filters, rng),
      metadata_dim(metadata_dim_in) {}

void ExpertNetwork::collect(std::vector<Parameter*>& out) {
  if (lstm) lstm->collect(out);
  conv.collect(out);
}

Var expert_forward(const Sequence& seq, const Var* metadata, ExpertNetwork& expert) {
  if (expert.metadata_dim > 0) {
    if (metadata == nullptr) fail<DimensionError>("expert_forward: expert expects ", expert.metadata_dim, " metadata features");
    const Tensor& m = metadata->value();
    if (m.cols() != expert.metadata_dim || m.rows() != seq.batch()) {
      fail<DimensionError>("expert_forward: metadata ", num::to_string(m.shape()), " but expert expects width ",
                           expert.metadata_dim, " for batch ", seq.batch());
    }
    if (metadata->requires_grad()) fail("expert_forward: metadata must be a constant input");
  } else if (metadata != nullptr) {
    fail<DimensionError>("expert_forward: metadata given to an expert with M = 0");
  }
  const std::vector<Var> hidden = expert.lstm ? layers::bilstm_forward(seq, *expert.lstm) : seq.steps;
  if (!expert.lstm) layers::require_nonempty_rows(seq.mask, "expert_forward");
  const Var pooled = layers::conv_max_pool(hidden, seq.mask, expert.conv);
  if (expert.metadata_dim == 0) return pooled;
  const Var parts[] = {pooled, *metadata};
  return num::concat_cols(parts);
}

DomainGate::DomainGate(const std::string& prefix, std::size_t input_dim_in, std::size_t hidden_in,
                       std::size_t num_experts_in, SeededRng& rng)
    : input_dim(input_dim_in),
      hidden(hidden_in),
      num_experts(num_experts_in),
      w1(prefix + ".w1", layers::xavier_uniform({input_dim_in, hidden_in}, input_dim_in, hidden_in, rng)),
      b1(prefix + ".b1", Tensor({hidden_in})),
      w2(prefix + ".w2", layers::xavier_uniform({hidden_in, num_experts_in}, hidden_in, num_experts_in, rng)),
      b2(prefix + ".b2", Tensor({num_experts_in})) {}

void DomainGate::collect(std::vector<Parameter*>& out) {
  out.push_back(&w1);
  out.push_back(&b1);
  out.push_back(&w2);
  out.push_back(&b2);
}

Var gate_logits(Var domain_emb, Var sentence_emb, DomainGate& gate) {
  const std::size_t width = domain_emb.value().cols() + sentence_emb.value().cols();
  if (width != gate.input_dim) {
    fail<DimensionError>("gate: input width ", domain_emb.value().cols(), " + ", sentence_emb.value().cols(),
                         " does not match gate input ", gate.input_dim);
  }
  Graph& g = domain_emb.graph();
  const Var parts[] = {domain_emb, sentence_emb};
  const Var hidden = num::activate(num::affine(num::concat_cols(parts), g.parameter(gate.w1), g.parameter(gate.b1)),
                                   num::Activation::kRelu);
  return num::affine(hidden, g.parameter(gate.w2), g.parameter(gate.b2));
}

Var gate_weights(Var domain_emb, Var sentence_emb, DomainGate& gate) {
  return num::softmax_rows(gate_logits(domain_emb, sentence_emb, gate));
}

Var fuse(Var weights, std::span<const Var> expert_outputs) {
  const Tensor& a = weights.value();
  if (expert_outputs.empty() || a.cols() != expert_outputs.size()) {
    fail<DimensionError>("fuse: ", expert_outputs.size(), " expert outputs for gate weights ",
                         num::to_string(a.shape()));
  }
  const std::size_t width = expert_outputs.front().value().cols();
  std::vector<Var> terms;
  terms.reserve(expert_outputs.size());
  for (std::size_t i = 0; i < expert_outputs.size(); ++i) {
    if (expert_outputs[i].value().cols() != width) {
      fail<DimensionError>("fuse: expert ", i, " output width ", expert_outputs[i].value().cols(), " differs from ",
                           width);
    }
    terms.push_back(num::scale_rows(expert_outputs[i], weights, i));
  }
  return num::add_n(terms);
}

}  // namespace mdrd::moe
