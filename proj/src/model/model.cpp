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

#include "mdrd/model/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mdrd/error.hpp"
#include "mdrd/numerics/ops.hpp"

namespace mdrd::model {

namespace {

// Derived init streams, one per component.
constexpr std::uint64_t kDomainStream = 1;
constexpr std::uint64_t kGateStream = 2;
constexpr std::uint64_t kAttentionStream = 3;
constexpr std::uint64_t kClassifierStream = 4;
constexpr std::uint64_t kExpertStreamBase = 100;

std::vector<std::size_t> classifier_widths(const MdrdConfig& c, std::size_t input) {
  std::vector<std::size_t> widths{input};
  widths.insert(widths.end(), c.mlp_hidden.begin(), c.mlp_hidden.end());
  widths.push_back(2);
  return widths;
}

const MdrdConfig& validated(const MdrdConfig& c) {
  c.validate();
  return c;
}

}  // namespace

MdrdModel::MdrdModel(MdrdConfig config)
    : config_(std::move(config)),
      classifier_([&]() -> layers::MlpParams {
        const MdrdConfig& c = validated(config_);
        SeededRng rng = SeededRng(c.seed).derive(kClassifierStream);
        std::size_t conv_out = c.conv_filters * c.conv_widths.size();
        return layers::MlpParams("classifier", classifier_widths(c, conv_out + c.metadata_dim),
                                 num::Activation::kRelu, c.mlp_dropout, rng);
      }()) {
  const SeededRng root(config_.seed);
  experts_.reserve(config_.num_experts);
  for (std::size_t i = 0; i < config_.num_experts; ++i) {
    SeededRng rng = root.derive(kExpertStreamBase + i);
    experts_.emplace_back(i, config_.embedding_dim, config_.lstm_hidden, config_.lstm_layers, config_.conv_widths,
                          config_.conv_filters, config_.metadata_dim, config_.use_lstm, rng);
  }
  if (config_.gate_mode == GateMode::kLearned) {
    SeededRng domain_rng = root.derive(kDomainStream);
    domain_table_.emplace("domain", config_.num_domains(), config_.domain_dim, domain_rng);
    SeededRng attention_rng = root.derive(kAttentionStream);
    attention_.emplace("attention", config_.embedding_dim, config_.resolved_attention_dim(), attention_rng);
    SeededRng gate_rng = root.derive(kGateStream);
    gate_.emplace("gate", config_.domain_dim + config_.embedding_dim, config_.gate_hidden, config_.num_experts,
                  gate_rng);
  }
}

std::vector<Parameter*> MdrdModel::parameters() {
  std::vector<Parameter*> out;
  for (auto& e : experts_) e.collect(out);
  if (domain_table_) domain_table_->collect(out);
  if (attention_) attention_->collect(out);
  if (gate_) gate_->collect(out);
  classifier_.collect(out);
  return out;
}

std::vector<const Parameter*> MdrdModel::parameters() const {
  auto mutable_params = const_cast<MdrdModel*>(this)->parameters();
  return {mutable_params.begin(), mutable_params.end()};
}

std::size_t MdrdModel::parameter_count() const {
  std::size_t n = 0;
  for (const Parameter* p : parameters()) n += p->value.size();
  return n;
}

std::size_t MdrdModel::expert_output_dim() const { return experts_.front().output_dim(); }

void MdrdModel::check_batch(const data::Batch& batch) const {
  if (batch.size() == 0 || batch.steps.empty()) fail("forward: empty batch");
  if (batch.steps.front().cols() != config_.embedding_dim) {
    fail<DimensionError>("forward: token width ", batch.steps.front().cols(), " but model expects ",
                         config_.embedding_dim);
  }
  if (batch.length() > config_.max_seq_len) {
    fail<DimensionError>("forward: batch length ", batch.length(), " exceeds max_seq_len ", config_.max_seq_len);
  }
  for (std::size_t d : batch.domains) {
    if (d >= config_.num_domains()) {
      fail<DimensionError>("domain id ", d, " out of range: table has K = ", config_.num_domains(), " domains");
    }
  }
  const std::size_t meta = batch.metadata.empty() ? 0 : batch.metadata.cols();
  if (meta != config_.metadata_dim) {
    fail<DimensionError>("forward: batch carries ", meta, " metadata features but model expects ",
                         config_.metadata_dim);
  }
}

ForwardOutput MdrdModel::forward(Graph& g, const data::Batch& batch, Mode mode, SeededRng* rng,
                                 const ForwardOptions& options) {
  check_batch(batch);
  const std::size_t b = batch.size();
  const std::size_t t_count = experts_.size();
  const layers::Sequence seq = layers::make_sequence(g, batch.steps, batch.mask);

  ForwardOutput out;
  std::optional<Var> metadata;
  if (config_.metadata_dim > 0) metadata = g.constant(batch.metadata);
  out.expert_outputs.reserve(t_count);
  for (auto& expert : experts_) {
    out.expert_outputs.push_back(moe::expert_forward(seq, metadata ? &*metadata : nullptr, expert));
  }

  std::optional<Tensor> fixed = options.forced_gate;
  if (!fixed && config_.gate_mode == GateMode::kUniform) {
    fixed = Tensor({t_count}, 1.0 / static_cast<double>(t_count));
  }
  if (fixed) {
    if (fixed->size() != t_count) {
      fail<DimensionError>("forward: forced gate has ", fixed->size(), " weights for ", t_count, " experts");
    }
    Tensor rows({b, t_count});
    for (std::size_t r = 0; r < b; ++r) std::copy(fixed->data().begin(), fixed->data().end(), rows.row(r).begin());
    out.gate = g.constant(std::move(rows));
  } else {
    const Var domain = moe::domain_embedding(g, batch.domains, *domain_table_);
    const Var sentence = layers::attention_pool(seq, *attention_).pooled;
    out.gate = moe::gate_weights(domain, sentence, *gate_);
  }

  out.fused = moe::fuse(out.gate, out.expert_outputs);
  out.logits = layers::mlp_forward(out.fused, classifier_, rng, mode);
  out.probs = num::softmax_rows(out.logits);
  return out;
}

Tensor MdrdModel::predict_proba(const data::Batch& batch, const ForwardOptions& options) {
  Graph g(num::GradMode::kDisabled);
  return forward(g, batch, Mode::kEval, nullptr, options).probs.value();
}

const std::vector<std::string>& variant_tags() {
  static const std::vector<std::string> tags = {"full",      "no_lstm",   "no_metadata",  "emb_last1",
                                                "emb_mean2", "emb_mean3", "uniform_gate", "single_expert"};
  return tags;
}

const std::vector<std::string>& ablation_variants() {
  static const std::vector<std::string> tags = {"no_lstm",   "no_metadata", "emb_last1",    "emb_mean2",
                                                "emb_mean3", "full",        "uniform_gate", "single_expert"};
  return tags;
}

MdrdConfig make_variant(const MdrdConfig& config, std::string_view tag) {
  MdrdConfig c = config;
  if (tag == "full") return c;
  if (tag == "no_lstm") c.use_lstm = false;
  else if (tag == "no_metadata") c.metadata_dim = 0;
  else if (tag == "emb_last1") c.embedding_layers = 1;
  else if (tag == "emb_mean2") c.embedding_layers = 2;
  else if (tag == "emb_mean3") c.embedding_layers = 3;
  else if (tag == "uniform_gate") c.gate_mode = GateMode::kUniform;
  else if (tag == "single_expert") c.num_experts = 1;
  else {
    std::string valid;
    for (const auto& t : variant_tags()) valid += (valid.empty() ? "" : ", ") + t;
    fail<ConfigError>("unknown variant '", tag, "'; valid variants: ", valid);
  }
  c.variant = std::string(tag);
  return c;
}

Var bce_loss(Var probs, std::span<const int> labels, double clip) {
  const Tensor& p = probs.value();
  if (p.rank() != 2 || p.cols() != 2 || p.rows() != labels.size()) {
    fail<DimensionError>("bce_loss: probabilities ", num::to_string(p.shape()), " for ", labels.size(), " labels");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) fail("bce_loss: label ", y, " is not in {0, 1}");
  }
  const std::size_t b = labels.size();
  std::vector<double> rumor(b);
  for (std::size_t r = 0; r < b; ++r) rumor[r] = p.at(r, 1);
  Tensor loss({1, 1}, bce_loss(rumor, labels, clip));

  std::vector<int> ys(labels.begin(), labels.end());
  const auto pid = probs.id();
  return probs.graph().emit(std::move(loss), {probs}, [pid, ys = std::move(ys), clip](Graph& g, const Tensor& gout) {
    const Tensor& p = g.value(pid);
    Tensor& gp = g.grad(pid);
    const double scale = gout[0] / static_cast<double>(ys.size());
    for (std::size_t r = 0; r < ys.size(); ++r) {
      const double q = p.at(r, 1);
      if (q < clip || q > 1.0 - clip) continue;  // clipped: flat
      gp.at(r, 1) += ys[r] == 1 ? -scale / q : scale / (1.0 - q);
    }
  });
}

double bce_loss(std::span<const double> p_rumor, std::span<const int> labels, double clip) {
  if (p_rumor.size() != labels.size() || labels.empty()) {
    fail<DimensionError>("bce_loss: ", p_rumor.size(), " probabilities for ", labels.size(), " labels");
  }
  double total = 0.0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] != 0 && labels[r] != 1) fail("bce_loss: label ", labels[r], " is not in {0, 1}");
    const double q = std::clamp(p_rumor[r], clip, 1.0 - clip);
    total += labels[r] == 1 ? std::log(q) : std::log(1.0 - q);
  }
  return -total / static_cast<double>(labels.size());
}

}  // namespace mdrd::model
