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

#ifndef MDRD_MODEL_MODEL_HPP_
#define MDRD_MODEL_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdrd/data/batch.hpp"
#include "mdrd/layers/attention.hpp"
#include "mdrd/layers/mlp.hpp"
#include "mdrd/model/config.hpp"
#include "mdrd/moe/moe.hpp"

namespace mdrd::model {

using layers::Mode;
using num::Graph;
using num::Parameter;
using num::SeededRng;
using num::Tensor;
using num::Var;

struct ForwardOptions {
  /// Replaces the learned gate with this [T] weight vector for every row.
  std::optional<Tensor> forced_gate;
};

struct ForwardOutput {
  Var probs;    // [B x 2]; column 1 = P(rumor)
  Var logits;   // [B x 2]
  Var gate;     // [B x T]
  Var fused;    // [B x R]
  std::vector<Var> expert_outputs;
};

/// Domain-gated mixture of BiLSTM+CNN experts with a softmax classifier.
///
/// Parameters are created from `config.seed` with a separate derived stream
/// per component, so the parameter census and initial values are fully
/// determined by the config.
class MdrdModel {
 public:
  explicit MdrdModel(MdrdConfig config);

  const MdrdConfig& config() const { return config_; }

  /// Every learnable tensor, in a fixed order; names are unique.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  std::size_t parameter_count() const;

  std::size_t expert_output_dim() const;

  /// Builds the forward pass of one batch on `g`. `rng` drives dropout and
  /// may be null in eval mode.
  ForwardOutput forward(Graph& g, const data::Batch& batch, Mode mode, SeededRng* rng,
                        const ForwardOptions& options = {});

  /// Eval-mode class probabilities [B x 2] without gradient bookkeeping.
  Tensor predict_proba(const data::Batch& batch, const ForwardOptions& options = {});

  std::vector<moe::ExpertNetwork>& experts() { return experts_; }
  layers::MlpParams& classifier() { return classifier_; }
  std::optional<moe::DomainEmbeddingTable>& domain_table() { return domain_table_; }
  std::optional<moe::DomainGate>& gate() { return gate_; }
  std::optional<layers::AttentionPoolingParams>& attention() { return attention_; }

 private:
  void check_batch(const data::Batch& batch) const;

  MdrdConfig config_;
  std::vector<moe::ExpertNetwork> experts_;
  std::optional<moe::DomainEmbeddingTable> domain_table_;
  std::optional<moe::DomainGate> gate_;
  std::optional<layers::AttentionPoolingParams> attention_;
  layers::MlpParams classifier_;
};

/// Ablation and diagnostic variants.
const std::vector<std::string>& variant_tags();

/// The published ablation rows plus the full model, in table order.
const std::vector<std::string>& ablation_variants();

/// Returns `config` adjusted for `tag`; unknown tags throw listing the valid ones.
MdrdConfig make_variant(const MdrdConfig& config, std::string_view tag);

/// Mean binary cross-entropy of P(rumor) = probs[:, 1] against {0,1}
/// labels, with probabilities clipped to [clip, 1 - clip].
Var bce_loss(Var probs, std::span<const int> labels, double clip = 1e-7);

/// Value-level loss over rumor probabilities.
double bce_loss(std::span<const double> p_rumor, std::span<const int> labels, double clip = 1e-7);

}  // namespace mdrd::model

#endif  // MDRD_MODEL_MODEL_HPP_
