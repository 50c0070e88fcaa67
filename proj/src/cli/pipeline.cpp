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


#include "mdrd/cli/pipeline.hpp"

#include <algorithm>

#include "mdrd/error.hpp"
#include "mdrd/io/file.hpp"
#include "mdrd/numerics/rng.hpp"

namespace mdrd::cli {

Corpus load_corpus(const RunConfig& config) {
  if (config.data.empty()) fail<ConfigError>("no dataset given (set 'data' or pass --data)");
  const auto emb_path = config.embeddings_path();
  data::require_embedding_dim(data::embedding_header(emb_path), config.model.embedding_dim);
  Corpus corpus;
  corpus.records = data::read_records(config.dataset_path());
  if (corpus.records.empty()) fail("dataset '", config.dataset_path().string(), "' has no records");
  corpus.embeddings = data::embedding_read_all(emb_path);
  return corpus;
}

RunConfig resolve_domains(RunConfig config, const Corpus& corpus) {
  if (config.model.domains.empty()) config.model.domains = data::domains_of(corpus.records);
  return config;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) { return num::derive_seed(base_seed, run); }

data::SplitIndices resolve_split(const RunConfig& config, const Corpus& corpus, std::uint64_t seed) {
  if (!config.split_file.empty()) {
    return data::split_from_json(nlohmann::json::parse(io::read_file(config.split_file)), corpus.records);
  }
  if (!config.leave_out_event.empty()) {
    return data::split_leave_event_out(corpus.records, config.leave_out_event, seed, config.stratify);
  }
  return data::split_holdout(corpus.records, config.ratios, seed, config.stratify);
}

namespace {

data::AssemblyOptions assembly_options(const RunConfig& config) {
  data::AssemblyOptions o;
  o.domains = config.model.domains;
  o.embedding_layers = config.model.embedding_layers;
  o.metadata_dim = config.model.metadata_dim;
  o.reference_date = config.reference_date;
  return o;
}

}  // namespace

eval::EvaluationReport evaluate_posts(model::MdrdModel& model, std::span<const data::EmbeddedPost> posts) {
  const model::Evaluation ev = model::evaluate_model(model, posts);
  std::vector<int> labels;
  std::vector<std::string> domains;
  for (const auto& p : posts) {
    labels.push_back(p.label);
    domains.push_back(model.config().domains.at(p.domain));
  }
  eval::EvaluationReport report;
  report.overall = ev.metrics;
  report.per_domain = eval::per_domain_metrics(ev.predictions, labels, domains);
  return report;
}

RunOutcome run_once(const RunConfig& config, const Corpus& corpus, std::uint64_t seed, const EpochCallback& on_epoch) {
  const data::SplitIndices split = resolve_split(config, corpus, seed);
  if (split.train.empty() || split.val.empty() || split.test.empty()) {
    fail("split leaves an empty part (train ", split.train.size(), ", val ", split.val.size(), ", test ",
         split.test.size(), ")");
  }
  const auto options = assembly_options(config);
  data::ZScoreStats fitted;
  const data::ZScoreStats* stats = nullptr;
  if (config.model.metadata_dim > 0) {
    fitted = data::fit_metadata(corpus.records, split.train, config.reference_date, "train");
    stats = &fitted;
  }
  const auto train_posts = data::assemble(corpus.records, split.train, corpus.embeddings, options, stats);
  const auto val_posts = data::assemble(corpus.records, split.val, corpus.embeddings, options, stats);
  const auto test_posts = data::assemble(corpus.records, split.test, corpus.embeddings, options, stats);

  model::MdrdConfig model_config = config.model;
  model_config.seed = seed;
  model::TrainOptions train_options;
  train_options.on_epoch = on_epoch;
  RunOutcome outcome{seed, model::train(train_posts, val_posts, model_config, train_options), std::move(fitted), {}};
  outcome.test = evaluate_posts(outcome.trained.model, test_posts);
  return outcome;
}

nlohmann::ordered_json checkpoint_extras(const RunConfig& config, const RunOutcome& outcome) {
  nlohmann::ordered_json j;
  j["reference_date"] = config.reference_date;
  j["zscore"] = config.model.metadata_dim > 0 ? data::to_json(outcome.stats) : nlohmann::ordered_json(nullptr);
  j["selected_epoch"] = outcome.trained.history.selected_epoch;
  return j;
}

RunConfig synthetic_run_config(const data::SyntheticSpec& spec, const data::SyntheticData& syn,
                               const std::filesystem::path& dir) {
  RunConfig c;
  model::MdrdConfig& m = c.model;
  m.embedding_dim = spec.dim;
  m.embedding_layers = std::min<std::size_t>(spec.layers, 4);
  m.lstm_hidden = 16;
  m.conv_filters = 16;
  m.domain_dim = 8;
  m.gate_hidden = 32;
  m.mlp_hidden = {32};
  m.domains = syn.domains;
  c.data = (dir / "data.jsonl").string();
  c.embeddings = (dir / "embeddings.bin").string();
  c.seeds = 1;
  c.out_dir = (dir / "run").string();
  c.reference_date = spec.reference_date;
  return c;
}

}  // namespace mdrd::cli
