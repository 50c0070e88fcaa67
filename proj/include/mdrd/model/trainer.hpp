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


#ifndef MDRD_MODEL_TRAINER_HPP_
#define MDRD_MODEL_TRAINER_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mdrd/data/batch.hpp"
#include "mdrd/eval/metrics.hpp"
#include "mdrd/model/model.hpp"

namespace mdrd::model {

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double val_f1 = 0.0;  // macro
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t selected_epoch = 0;  // 1-based; the epoch whose weights were kept
};

nlohmann::ordered_json to_json(const TrainHistory& history);

struct TrainOptions {
  std::size_t eval_batch_size = 256;
  /// Called after each epoch's validation pass.
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  MdrdModel model;
  TrainHistory history;
};

/// Mini-batch Adam over `train` for config.max_epochs epochs with a seeded
/// per-epoch shuffle. Keeps the weights of the epoch with the best
/// validation macro-F1 (earliest on ties).
TrainResult train(std::span<const data::EmbeddedPost> train_set, std::span<const data::EmbeddedPost> val_set,
                  const MdrdConfig& config, const TrainOptions& options = {});

/// Eval-mode P(rumor) for every post, in input order.
std::vector<double> predict_rumor_proba(MdrdModel& model, std::span<const data::EmbeddedPost> posts,
                                        std::size_t batch_size = 256);

struct Evaluation {
  double loss = 0.0;
  std::vector<double> probabilities;
  std::vector<int> predictions;  // P(rumor) >= 0.5
  eval::MetricsReport metrics;
};

Evaluation evaluate_model(MdrdModel& model, std::span<const data::EmbeddedPost> posts,
                          std::size_t batch_size = 256);

}  // namespace mdrd::model

#endif  // MDRD_MODEL_TRAINER_HPP_
