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


#ifndef MDRD_CLI_PIPELINE_HPP_
#define MDRD_CLI_PIPELINE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdrd/cli/run_config.hpp"
#include "mdrd/data/dataset.hpp"
#include "mdrd/data/split.hpp"
#include "mdrd/data/synth.hpp"
#include "mdrd/eval/metrics.hpp"
#include "mdrd/model/trainer.hpp"

namespace mdrd::cli {

struct Corpus {
  std::vector<data::PostRecord> records;
  data::EmbeddingFile embeddings;
};

/// Reads the dataset and embeddings named by `config`. The embedding header
/// is checked against embedding_dim before anything else is loaded.
Corpus load_corpus(const RunConfig& config);

/// Fills model.domains from the corpus when the config leaves it empty.
RunConfig resolve_domains(RunConfig config, const Corpus& corpus);

/// Seed of run r in a repeated-seed protocol.
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run);

data::SplitIndices resolve_split(const RunConfig& config, const Corpus& corpus, std::uint64_t seed);

struct RunOutcome {
  std::uint64_t seed = 0;
  model::TrainResult trained;
  data::ZScoreStats stats;
  eval::EvaluationReport test;
};

using EpochCallback = std::function<void(const model::EpochRecord&)>;

/// Splits (unless a split file is given), fits metadata statistics on the
/// training part, trains with `seed`, and evaluates on the test part.
RunOutcome run_once(const RunConfig& config, const Corpus& corpus, std::uint64_t seed,
                    const EpochCallback& on_epoch = {});

/// Checkpoint side data needed to rebuild inputs at evaluation time.
nlohmann::ordered_json checkpoint_extras(const RunConfig& config, const RunOutcome& outcome);

/// Per-domain and overall report for `posts` scored by `model`.
/// Run configuration sized for the synthetic corpus in `dir`: small experts,
/// one seed, data and embeddings pointing into `dir`.
RunConfig synthetic_run_config(const data::SyntheticSpec& spec, const data::SyntheticData& syn,
                               const std::filesystem::path& dir);

eval::EvaluationReport evaluate_posts(model::MdrdModel& model, std::span<const data::EmbeddedPost> posts);

}  // namespace mdrd::cli

#endif  // MDRD_CLI_PIPELINE_HPP_
