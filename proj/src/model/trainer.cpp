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


#include "mdrd/model/trainer.hpp"

#include <numeric>
#include <set>

#include "mdrd/error.hpp"
#include "mdrd/model/adam.hpp"

namespace mdrd::model {

namespace {

constexpr std::uint64_t kShuffleStream = 1000;
constexpr std::uint64_t kDropoutStream = 2000;

void check_domains(std::span<const data::EmbeddedPost> posts, std::size_t num_domains, const char* split) {
  for (const auto& p : posts) {
    if (p.domain >= num_domains) {
      fail("train: unknown domain id ", p.domain, " in ", split, " post '", p.id, "' (K = ", num_domains, ")");
    }
  }
}

std::vector<num::Tensor> snapshot(MdrdModel& model) {
  std::vector<num::Tensor> out;
  for (const num::Parameter* p : model.parameters()) out.push_back(p->value);
  return out;
}

void restore(MdrdModel& model, const std::vector<num::Tensor>& values) {
  auto params = model.parameters();
  for (std::size_t k = 0; k < params.size(); ++k) params[k]->value = values[k];
}

}  // namespace

nlohmann::ordered_json to_json(const TrainHistory& h) {
  nlohmann::ordered_json j;
  j["selected_epoch"] = h.selected_epoch;
  nlohmann::ordered_json epochs = nlohmann::ordered_json::array();
  for (const auto& e : h.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"val_loss", e.val_loss},
                      {"val_accuracy", e.val_accuracy},
                      {"val_f1", e.val_f1}});
  }
  j["epochs"] = std::move(epochs);
  return j;
}

Evaluation evaluate_model(MdrdModel& model, std::span<const data::EmbeddedPost> posts, std::size_t batch_size) {
  if (posts.empty()) fail("evaluate: empty split");
  if (batch_size == 0) fail("evaluate: batch size must be positive");
  Evaluation ev;
  std::vector<int> labels;
  ev.probabilities.reserve(posts.size());
  for (std::size_t start = 0; start < posts.size(); start += batch_size) {
    const auto chunk = posts.subspan(start, std::min(batch_size, posts.size() - start));
    const data::Batch batch = data::collate(chunk, model.config().max_seq_len);
    const Tensor probs = model.predict_proba(batch);
    for (std::size_t r = 0; r < batch.size(); ++r) {
      ev.probabilities.push_back(probs.at(r, 1));
      labels.push_back(batch.labels[r]);
    }
  }
  for (double p : ev.probabilities) ev.predictions.push_back(p >= 0.5 ? 1 : 0);
  ev.loss = bce_loss(ev.probabilities, labels);
  ev.metrics = eval::classification_metrics(ev.predictions, labels);
  return ev;
}

std::vector<double> predict_rumor_proba(MdrdModel& model, std::span<const data::EmbeddedPost> posts,
                                        std::size_t batch_size) {
  if (batch_size == 0) fail("predict: batch size must be positive");
  std::vector<double> out;
  out.reserve(posts.size());
  for (std::size_t start = 0; start < posts.size(); start += batch_size) {
    const auto chunk = posts.subspan(start, std::min(batch_size, posts.size() - start));
    const Tensor probs = model.predict_proba(data::collate(chunk, model.config().max_seq_len));
    for (std::size_t r = 0; r < chunk.size(); ++r) out.push_back(probs.at(r, 1));
  }
  return out;
}

TrainResult train(std::span<const data::EmbeddedPost> train_set, std::span<const data::EmbeddedPost> val_set,
                  const MdrdConfig& config, const TrainOptions& options) {
  config.validate();
  if (train_set.empty()) fail("train: empty training split");
  if (val_set.empty()) fail("train: empty validation split");
  check_domains(train_set, config.num_domains(), "training");
  check_domains(val_set, config.num_domains(), "validation");
  std::set<std::size_t> seen;
  for (const auto& p : train_set) seen.insert(p.domain);
  for (const auto& p : val_set) {
    if (!seen.count(p.domain)) {
      fail("train: validation post '", p.id, "' has domain id ", p.domain, " which never occurs in training");
    }
  }

  TrainResult result{MdrdModel(config), {}};
  MdrdModel& model = result.model;
  auto params = model.parameters();
  AdamState adam(params);
  for (num::Parameter* p : params) p->zero_grad();

  const SeededRng root(config.seed);
  std::vector<std::size_t> order(train_set.size());
  double best_f1 = -1.0;
  std::vector<num::Tensor> best;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    SeededRng shuffler = root.derive(kShuffleStream + epoch);
    shuffler.shuffle(std::span<std::size_t>(order));

    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<const data::EmbeddedPost*> members;
      for (std::size_t i = start; i < end; ++i) members.push_back(&train_set[order[i]]);
      const data::Batch batch = data::collate(members, config.max_seq_len);

      SeededRng dropout_rng(num::derive_seed(num::derive_seed(config.seed, kDropoutStream + epoch), batch_index));
      Graph g;
      const ForwardOutput out = model.forward(g, batch, Mode::kTrain, &dropout_rng);
      const Var loss = bce_loss(out.probs, batch.labels);
      g.backward(loss);
      adam.step(params, config.learning_rate, config.weight_decay);
      loss_sum += loss.value()[0] * static_cast<double>(batch.size());
    }

    const Evaluation val = evaluate_model(model, val_set, options.eval_batch_size);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train_set.size());
    rec.val_loss = val.loss;
    rec.val_accuracy = val.metrics.accuracy;
    rec.val_f1 = val.metrics.macro_f1;
    result.history.epochs.push_back(rec);
    if (rec.val_f1 > best_f1) {
      best_f1 = rec.val_f1;
      best = snapshot(model);
      result.history.selected_epoch = epoch;
    }
    if (options.on_epoch) options.on_epoch(rec);
  }
  if (!best.empty()) restore(model, best);
  return result;
}

}  // namespace mdrd::model
