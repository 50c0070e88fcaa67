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

#ifndef MDRD_MOE_MOE_HPP_
#define MDRD_MOE_MOE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdrd/layers/common.hpp"
#include "mdrd/layers/conv.hpp"
#include "mdrd/layers/lstm.hpp"

namespace mdrd::moe {

using layers::Graph;
using layers::Parameter;
using layers::SeededRng;
using layers::Sequence;
using layers::Tensor;
using layers::Var;

/// One learnable row per domain.
struct DomainEmbeddingTable {
  DomainEmbeddingTable(const std::string& prefix, std::size_t num_domains, std::size_t dim, SeededRng& rng);

  std::size_t num_domains;
  std::size_t dim;
  Parameter table;  // [K x Ddom]

  void collect(std::vector<Parameter*>& out);
};

/// Rows of the table for the given domain ids; throws naming the id and K
/// when an id is out of range.
Var domain_embedding(Graph& g, std::span<const std::size_t> domains, DomainEmbeddingTable& table);

/// BiLSTM stack (absent in the no-LSTM ablation) feeding a TextCNN bank,
/// with raw metadata appended to the pooled features.
struct ExpertNetwork {
  ExpertNetwork(std::size_t index, std::size_t token_dim, std::size_t hidden, std::size_t lstm_layers,
                std::vector<std::size_t> conv_widths, std::size_t conv_filters, std::size_t metadata_dim,
                bool use_lstm, SeededRng& rng);

  std::size_t index;
  std::optional<layers::BiLstmStack> lstm;
  layers::ConvBank conv;
  std::size_t metadata_dim;

  std::size_t output_dim() const { return conv.output_dim() + metadata_dim; }
  void collect(std::vector<Parameter*>& out);
};

/// r = [conv_max_pool(bilstm(W)) | m]. `metadata` is [B x M] and must be
/// null exactly when the expert has M = 0. Metadata is a constant input.
Var expert_forward(const Sequence& seq, const Var* metadata, ExpertNetwork& expert);

/// Feed-forward gate: [e_d | e_s] -> affine -> relu -> affine -> T logits.
struct DomainGate {
  DomainGate(const std::string& prefix, std::size_t input_dim, std::size_t hidden, std::size_t num_experts,
             SeededRng& rng);

  std::size_t input_dim;
  std::size_t hidden;
  std::size_t num_experts;
  Parameter w1, b1, w2, b2;

  void collect(std::vector<Parameter*>& out);
};

/// Gate logits before normalization, [B x T].
Var gate_logits(Var domain_emb, Var sentence_emb, DomainGate& gate);

/// a = softmax(G([e_d | e_s])), one simplex row per sample.
Var gate_weights(Var domain_emb, Var sentence_emb, DomainGate& gate);

/// v = sum_i a[:, i] * r_i, accumulated in expert order i = 1..T.
Var fuse(Var weights, std::span<const Var> expert_outputs);

}  // namespace mdrd::moe

#endif  // MDRD_MOE_MOE_HPP_
