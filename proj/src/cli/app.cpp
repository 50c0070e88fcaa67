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

#include "mdrd/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mdrd/cli/pipeline.hpp"
#include "mdrd/cli/run_config.hpp"
#include "mdrd/data/synth.hpp"
#include "mdrd/error.hpp"
#include "mdrd/eval/kappa.hpp"
#include "mdrd/io/file.hpp"
#include "mdrd/model/audit.hpp"
#include "mdrd/model/checkpoint.hpp"

namespace mdrd::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel log_level() {
  const char* v = std::getenv("MDRD_LOG_LEVEL");
  if (!v) return LogLevel::kInfo;
  const std::string s(v);
  if (s == "quiet" || s == "error") return LogLevel::kQuiet;
  if (s == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

// Timestamped run log; kept apart from result files so those stay
// byte-identical across repeated runs.
class RunLog {
 public:
  RunLog(const fs::path& path, std::ostream& err) : file_(path, std::ios::app), err_(err), level_(log_level()) {}

  void info(const std::string& line) {
    stamp(line);
    if (level_ != LogLevel::kQuiet) err_ << line << '\n';
  }

 private:
  void stamp(const std::string& line) {
    if (!file_) return;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    file_ << buf << ' ' << line << '\n';
  }

  std::ofstream file_;
  std::ostream& err_;
  LogLevel level_;
};

void write_json(const fs::path& path, const ordered_json& j) { io::write_file_atomic(path, j.dump(2) + "\n"); }

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail("cannot create output directory '", dir.string(), "'");
}

// Options shared by train, ablate and sweep.
struct RunFlags {
  std::string config;
  std::string data;
  std::string embeddings;
  std::string split;
  std::string out;
  std::string event;
  std::string variant;
  std::optional<std::size_t> seeds;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool config_required) {
  auto* cfg = cmd->add_option("--config,-c", f.config, "Run configuration (flat JSON object)");
  if (config_required) cfg->required();
  cmd->add_option("--data,-d", f.data, "Dataset JSONL or a directory holding data.jsonl");
  cmd->add_option("--embeddings", f.embeddings, "Embedding file (default: embeddings.bin beside the dataset)");
  cmd->add_option("--split", f.split, "Split file with fixed id lists");
  cmd->add_option("--leave-out-event", f.event, "Hold out every post of this event as the test set");
  cmd->add_option("--out,-o", f.out, "Output directory");
  cmd->add_option("--seeds", f.seeds, "Number of repeated runs");
  cmd->add_option("--seed", f.seed, "Base seed");
  cmd->add_option("--variant", f.variant, "Apply an ablation or diagnostic variant");
  cmd->add_option("--set", f.overrides, "Override a config key (key=value), repeatable");
}

RunConfig resolve_run_config(const RunFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  for (const auto& o : f.overrides) apply_override(c, o);
  if (!f.data.empty()) c.data = f.data;
  if (!f.embeddings.empty()) c.embeddings = f.embeddings;
  if (!f.split.empty()) c.split_file = f.split;
  if (!f.event.empty()) c.leave_out_event = f.event;
  if (!f.out.empty()) c.out_dir = f.out;
  if (f.seeds) {
    if (*f.seeds == 0) fail<ConfigError>("--seeds must be positive");
    c.seeds = *f.seeds;
  }
  if (f.seed) c.model.seed = *f.seed;
  if (!f.variant.empty()) c.model = model::make_variant(c.model, f.variant);
  return c;
}

ordered_json run_summary(const RunOutcome& r) {
  ordered_json j;
  j["seed"] = r.seed;
  j["selected_epoch"] = r.trained.history.selected_epoch;
  j["test"] = eval::to_json(r.test);
  return j;
}

// ---------------------------------------------------------------- train

int cmd_train(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  RunConfig config = resolve_run_config(flags);
  const Corpus corpus = load_corpus(config);
  config = resolve_domains(config, corpus);
  config.model.validate();

  const fs::path dir(config.out_dir);
  ensure_dir(dir);
  RunLog log(dir / "train.log", err);
  std::vector<eval::EvaluationReport> reports;
  ordered_json runs = ordered_json::array();
  for (std::size_t r = 0; r < config.seeds; ++r) {
    const std::uint64_t seed = config.seeds == 1 ? config.model.seed : run_seed(config.model.seed, r);
    const fs::path run_dir = config.seeds == 1 ? dir : dir / ("run-" + std::to_string(r));
    ensure_dir(run_dir);
    log.info("run " + std::to_string(r + 1) + "/" + std::to_string(config.seeds) + " seed " + std::to_string(seed));
    const RunOutcome outcome = run_once(config, corpus, seed, [&](const model::EpochRecord& e) {
      log.info("  epoch " + std::to_string(e.epoch) + " train_loss " + fixed(e.train_loss, 6) + " val_acc " +
               fixed(e.val_accuracy) + " val_f1 " + fixed(e.val_f1));
    });
    model::checkpoint_save(outcome.trained.model, run_dir / "checkpoint.bin", checkpoint_extras(config, outcome));
    write_json(run_dir / "history.json", model::to_json(outcome.trained.history));
    ordered_json result;
    result["command"] = "train";
    result["config"] = to_json(config);
    result["run"] = run_summary(outcome);
    write_json(run_dir / "result.json", result);
    out << "run " << r + 1 << ": seed " << seed << "  test acc " << fixed(outcome.test.overall.accuracy) << "  macro-F1 "
        << fixed(outcome.test.overall.macro_f1) << "  (epoch " << outcome.trained.history.selected_epoch << ")\n";
    reports.push_back(outcome.test);
    runs.push_back(run_summary(outcome));
  }

  if (config.seeds > 1) {
    const eval::AggregateReport agg = eval::aggregate_runs(std::span<const eval::EvaluationReport>(reports));
    ordered_json j;
    j["command"] = "train";
    j["config"] = to_json(config);
    j["aggregate"] = eval::to_json(agg);
    j["runs"] = std::move(runs);
    write_json(dir / "aggregate.json", j);
    out << "over " << agg.runs << " runs: accuracy " << fixed(agg.mean.at("accuracy")) << " +/- "
        << fixed(agg.stddev.at("accuracy")) << ", macro-F1 " << fixed(agg.mean.at("macro_f1")) << " +/- "
        << fixed(agg.stddev.at("macro_f1")) << "\n";
  }
  out << "results written to " << dir.string() << "\n";
  return kOk;
}

// ------------------------------------------------------- evaluate / predict

struct ScoringFlags {
  std::string checkpoint;
  std::string data;
  std::string embeddings;
  std::string split;
  std::string part = "test";
  std::string out;
};

struct ScoringInputs {
  model::LoadedCheckpoint ckpt;
  Corpus corpus;
  std::vector<std::size_t> indices;
};

ScoringInputs load_scoring_inputs(const ScoringFlags& f) {
  model::LoadedCheckpoint ckpt = model::checkpoint_load(f.checkpoint);
  RunConfig rc;
  rc.model = ckpt.model.config();
  rc.data = f.data;
  rc.embeddings = f.embeddings;
  Corpus corpus = load_corpus(rc);
  std::vector<std::size_t> indices;
  if (!f.split.empty()) {
    const auto split = data::split_from_json(json::parse(io::read_file(f.split)), corpus.records);
    if (f.part == "train") indices = split.train;
    else if (f.part == "val") indices = split.val;
    else if (f.part == "test") indices = split.test;
    else fail<ConfigError>("--part must be train, val or test");
  } else {
    for (std::size_t i = 0; i < corpus.records.size(); ++i) indices.push_back(i);
  }
  return {std::move(ckpt), std::move(corpus), std::move(indices)};
}

std::vector<data::EmbeddedPost> scoring_posts(const ScoringInputs& in) {
  const model::MdrdConfig& mc = in.ckpt.model.config();
  data::AssemblyOptions o;
  o.domains = mc.domains;
  o.embedding_layers = mc.embedding_layers;
  o.metadata_dim = mc.metadata_dim;
  o.reference_date = in.ckpt.extras.value("reference_date", o.reference_date);
  std::optional<data::ZScoreStats> stats;
  if (mc.metadata_dim > 0) {
    if (!in.ckpt.extras.contains("zscore") || in.ckpt.extras["zscore"].is_null()) {
      fail<FormatError>("checkpoint lacks metadata statistics");
    }
    stats = data::zscore_from_json(json::parse(in.ckpt.extras["zscore"].dump()));
  }
  return data::assemble(in.corpus.records, in.indices, in.corpus.embeddings, o, stats ? &*stats : nullptr);
}

int cmd_evaluate(const ScoringFlags& f, std::ostream& out) {
  ScoringInputs in = load_scoring_inputs(f);
  const auto posts = scoring_posts(in);
  if (posts.empty()) fail("nothing to evaluate");
  const eval::EvaluationReport report = evaluate_posts(in.ckpt.model, posts);
  ordered_json j;
  j["command"] = "evaluate";
  j["config"] = model::to_json(in.ckpt.model.config());
  j["report"] = eval::to_json(report);
  const fs::path path = f.out.empty() ? fs::path("evaluation.json") : fs::path(f.out);
  write_json(path, j);
  out << "accuracy " << fixed(report.overall.accuracy) << "  macro-F1 " << fixed(report.overall.macro_f1) << "  ("
      << report.overall.count << " posts)\n\n";
  out << eval::render_domain_table(report.per_domain);
  return kOk;
}

int cmd_predict(const ScoringFlags& f, std::ostream& out) {
  ScoringInputs in = load_scoring_inputs(f);
  const auto posts = scoring_posts(in);
  const auto probs = model::predict_rumor_proba(in.ckpt.model, posts);
  std::string lines;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    ordered_json j;
    j["id"] = posts[i].id;
    j["p_rumor"] = probs[i];
    j["label"] = probs[i] >= 0.5 ? "rumor" : "nonrumor";
    lines += j.dump() + "\n";
  }
  const fs::path path = f.out.empty() ? fs::path("predictions.jsonl") : fs::path(f.out);
  io::write_file_atomic(path, lines);
  out << posts.size() << " predictions written to " << path.string() << "\n";
  return kOk;
}

// -------------------------------------------------------- ablate / sweep

struct Comparison {
  std::string label;
  RunConfig config;
};

int compare_runs(const std::string& command, const std::string& key, const RunConfig& base,
                 const std::vector<Comparison>& rows, const Corpus& corpus, std::ostream& out, std::ostream& err) {
  const fs::path dir(base.out_dir);
  ensure_dir(dir);
  RunLog log(dir / (command + ".log"), err);
  ordered_json table = ordered_json::array();
  std::ostringstream text;
  text << key << "\tF1\tACC\n";
  for (const auto& row : rows) {
    std::vector<eval::EvaluationReport> reports;
    for (std::size_t r = 0; r < base.seeds; ++r) {
      const std::uint64_t seed = base.seeds == 1 ? base.model.seed : run_seed(base.model.seed, r);
      log.info(command + " " + row.label + " run " + std::to_string(r + 1) + " seed " + std::to_string(seed));
      reports.push_back(run_once(row.config, corpus, seed).test);
    }
    std::vector<eval::MetricsReport> overall;
    for (const auto& rep : reports) overall.push_back(rep.overall);
    const auto agg = eval::aggregate_runs(std::span<const eval::MetricsReport>(overall));
    ordered_json j;
    j[key] = row.label;
    j["config"] = to_json(row.config);
    j["aggregate"] = eval::to_json(agg);
    table.push_back(std::move(j));
    text << row.label << '\t' << fixed(100.0 * agg.mean.at("macro_f1"), 2) << '\t'
         << fixed(100.0 * agg.mean.at("accuracy"), 2) << '\n';
  }
  ordered_json result;
  result["command"] = command;
  result["config"] = to_json(base);
  result["rows"] = std::move(table);
  write_json(dir / (command + ".json"), result);
  io::write_file_atomic(dir / (command + ".tsv"), text.str());
  out << text.str();
  return kOk;
}

int cmd_ablate(const RunFlags& flags, const std::string& variants, std::ostream& out, std::ostream& err) {
  RunConfig config = resolve_run_config(flags);
  std::vector<std::string> tags = variants.empty() ? model::ablation_variants() : split_list(variants);
  std::vector<Comparison> rows;
  for (const auto& tag : tags) rows.push_back({tag, config});  // tags validated below, before any training
  for (auto& row : rows) row.config.model = model::make_variant(config.model, row.label);
  const Corpus corpus = load_corpus(config);
  const std::size_t stored = corpus.embeddings.header.layers;
  for (auto& row : rows) {
    if (stored > 1 && row.config.model.embedding_layers > stored) {
      fail<ConfigError>("variant '", row.label, "' averages ", row.config.model.embedding_layers,
                        " layers but the embedding file stores ", stored);
    }
    row.config = resolve_domains(row.config, corpus);
  }
  return compare_runs("ablate", "variant", resolve_domains(config, corpus), rows, corpus, out, err);
}

int cmd_sweep(const RunFlags& flags, const std::string& key, const std::string& values, std::ostream& out,
              std::ostream& err) {
  RunConfig config = resolve_run_config(flags);
  const json list = json::parse(values, nullptr, false);
  if (list.is_discarded() || !list.is_array() || list.empty()) {
    fail<ConfigError>("--values must be a non-empty JSON list, e.g. [0.2,0.4]");
  }
  std::vector<Comparison> rows;
  for (const auto& v : list) {
    RunConfig c = config;
    set_run_value(c, key, v);
    rows.push_back({v.dump(), c});
  }
  const Corpus corpus = load_corpus(config);
  for (auto& row : rows) row.config = resolve_domains(row.config, corpus);
  return compare_runs("sweep", key, resolve_domains(config, corpus), rows, corpus, out, err);
}

// ------------------------------------------------------------ other

int cmd_preprocess(const std::string& input, const std::string& output, const std::string& config_path,
                   const std::string& emoji_path, const std::string& report_path, std::ostream& out) {
  if (fs::exists(output) && fs::exists(input) && fs::equivalent(input, output)) {
    fail<ConfigError>("preprocess would overwrite its input '", input, "'");
  }
  data::CleanOptions options;
  if (!config_path.empty()) {
    const RunConfig rc = load_run_config(config_path);
    options.emoji_map = rc.emoji_map;
    if (!rc.char_map.empty()) options.char_substitutions = rc.char_map;
  }
  if (!emoji_path.empty()) {
    const json j = json::parse(io::read_file(emoji_path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail<FormatError>("emoji map '", emoji_path, "' must be a JSON object");
    options.emoji_map = j.get<std::map<std::string, std::string>>();
  }
  const auto records = data::read_records(input);
  const auto result = data::preprocess(records, options);
  data::write_records(output, result.records);
  if (!report_path.empty()) write_json(report_path, data::to_json(result.stats));
  const auto& s = result.stats;
  out << "kept " << s.kept << " of " << s.input << " records (dropped: " << s.dropped_metadata << " missing metadata, "
      << s.dropped_empty << " empty after cleaning, " << s.dropped_duplicate << " duplicates)\n";
  return kOk;
}

int cmd_split(const std::string& data_path, const std::string& output, std::uint64_t seed, const std::string& ratios,
              const std::string& event, bool no_stratify, std::ostream& out) {
  RunConfig rc;
  rc.data = data_path;
  const auto records = data::read_records(rc.dataset_path());
  data::SplitIndices split;
  if (!event.empty()) {
    split = data::split_leave_event_out(records, event, seed, !no_stratify);
  } else {
    const auto parts = split_list(ratios);
    if (parts.size() != 3) fail<ConfigError>("--ratios needs three comma-separated values");
    std::array<double, 3> r{};
    for (std::size_t k = 0; k < 3; ++k) r[k] = std::stod(parts[k]);
    split = data::split_holdout(records, r, seed, !no_stratify);
  }
  write_json(output, data::split_to_json(split, records));
  out << "train " << split.train.size() << ", val " << split.val.size() << ", test " << split.test.size() << " -> "
      << output << "\n";
  return kOk;
}

int cmd_synth(const data::SyntheticSpec& spec, const std::string& out_dir, std::ostream& out) {
  const auto syn = data::synth_generate(spec);
  const fs::path dir(out_dir);
  ensure_dir(dir);
  data::write_records(dir / "data.jsonl", syn.records);
  data::embedding_write(dir / "embeddings.bin", static_cast<std::uint32_t>(spec.dim),
                        static_cast<std::uint32_t>(spec.layers), syn.embeddings);
  ordered_json side;
  side["spec"] = data::to_json(spec);
  side["domains"] = syn.domains;
  side["records"] = syn.records.size();
  side["bayes_accuracy"] = syn.bayes_accuracy;
  side["domain_blind_cap"] = syn.domain_blind_cap;
  write_json(dir / "synth.json", side);
  write_json(dir / "config.json", to_json(synthetic_run_config(spec, syn, dir)));
  out << syn.records.size() << " posts over " << syn.domains.size() << " domains -> " << dir.string()
      << " (Bayes accuracy " << fixed(syn.bayes_accuracy) << ", domain-blind cap " << fixed(syn.domain_blind_cap)
      << ")\n";
  return kOk;
}

int cmd_kappa(const std::string& ratings, const std::string& out_path, std::ostream& out) {
  const auto matrix = eval::parse_ratings(io::read_file(ratings));
  const double kappa = eval::fleiss_kappa(matrix);
  const std::string band = eval::kappa_band(kappa);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", kappa);
  out << "kappa = " << buf << "\n" << "band: " << band << "\n";
  if (!out_path.empty()) {
    ordered_json j;
    j["items"] = matrix.items();
    j["categories"] = matrix.categories();
    j["raters"] = matrix.raters();
    j["kappa"] = kappa;
    j["band"] = band;
    write_json(out_path, j);
  }
  return kOk;
}

int cmd_gradcheck(std::uint64_t seed, double tolerance, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = model::gradcheck_tiny_model(seed);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", r.max_rel_error);
  out << "worst relative error " << buf << " at " << r.worst_parameter << "[" << r.worst_index << "] over "
      << r.checked << " parameters (" << fixed(secs, 1) << " s)\n";
  return r.max_rel_error < tolerance ? kOk : kRuntimeError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-domain rumor detection with a domain-gated mixture of experts", "mdrd"};
  app.require_subcommand(1);

  RunFlags train_flags;
  auto* train = app.add_subcommand("train", "Train and evaluate on the configured split");
  add_run_flags(train, train_flags, true);

  RunFlags ablate_flags;
  std::string variants;
  auto* ablate = app.add_subcommand("ablate", "Train every variant on shared splits and compare");
  add_run_flags(ablate, ablate_flags, true);
  ablate->add_option("--variants", variants, "Comma-separated variant tags (default: the ablation table)");

  RunFlags sweep_flags;
  std::string sweep_key, sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Train once per value of one config key");
  add_run_flags(sweep, sweep_flags, true);
  sweep->add_option("--key", sweep_key, "Config key to vary")->required();
  sweep->add_option("--values", sweep_values, "JSON list of values")->required();

  ScoringFlags eval_flags, predict_flags;
  auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint on a dataset");
  auto* predict = app.add_subcommand("predict", "Write per-post rumor probabilities");
  for (auto [cmd, f] : {std::pair{evaluate, &eval_flags}, std::pair{predict, &predict_flags}}) {
    cmd->add_option("--checkpoint", f->checkpoint, "Checkpoint file")->required();
    cmd->add_option("--data,-d", f->data, "Dataset JSONL or directory")->required();
    cmd->add_option("--embeddings", f->embeddings, "Embedding file");
    cmd->add_option("--split", f->split, "Split file; restricts scoring to --part");
    cmd->add_option("--part", f->part, "train, val or test")->check(CLI::IsMember({"train", "val", "test"}));
    cmd->add_option("--out,-o", f->out, "Output file");
  }

  std::string pre_in, pre_out, pre_config, pre_emoji, pre_report;
  auto* preprocess = app.add_subcommand("preprocess", "Clean, filter and deduplicate a dataset");
  preprocess->add_option("--input,-i", pre_in, "Raw dataset JSONL")->required();
  preprocess->add_option("--output,-o", pre_out, "Cleaned dataset JSONL")->required();
  preprocess->add_option("--config,-c", pre_config, "Run configuration (emoji_map, char_map)");
  preprocess->add_option("--emoji-map", pre_emoji, "JSON object mapping emoji to words");
  preprocess->add_option("--report", pre_report, "Write drop counts as JSON");

  std::string split_data, split_out, split_ratios = "0.6,0.2,0.2", split_event;
  std::uint64_t split_seed = 42;
  bool split_flat = false;
  auto* split = app.add_subcommand("split", "Write train/val/test id lists");
  split->add_option("--data,-d", split_data, "Dataset JSONL or directory")->required();
  split->add_option("--out,-o", split_out, "Split file")->required();
  split->add_option("--seed", split_seed, "Shuffle seed");
  split->add_option("--ratios", split_ratios, "train,val,test ratios");
  split->add_option("--leave-out-event", split_event, "Use this event as the test set");
  split->add_flag("--no-stratify", split_flat, "Do not split each domain separately");

  data::SyntheticSpec spec;
  std::string synth_out;
  bool no_cue = false;
  auto* synth = app.add_subcommand("synth", "Generate a planted-rule multi-domain corpus");
  synth->add_option("--out,-o", synth_out, "Output directory")->required();
  synth->add_option("--seed", spec.seed, "Generator seed");
  synth->add_option("--domains", spec.num_domains, "Number of domains");
  synth->add_option("--per-domain", spec.samples_per_domain, "Posts per domain");
  synth->add_option("--domain-sizes", spec.domain_sizes, "Posts per domain, one value each")->delimiter(',');
  synth->add_option("--dim", spec.dim, "Token embedding width");
  synth->add_option("--layers", spec.layers, "Hidden layers stored per token");
  synth->add_option("--vocab", spec.vocab_size, "Filler vocabulary size");
  synth->add_option("--min-len", spec.min_len, "Shortest post");
  synth->add_option("--max-len", spec.max_len, "Longest post");
  synth->add_flag("--no-cue", no_cue, "Omit the per-domain marker token");
  synth->add_flag("--order-sensitive", spec.order_sensitive, "Signal is a bigram order");
  synth->add_option("--metadata-signal", spec.metadata_signal, "Label shift carried by follower counts");
  synth->add_option("--noise", spec.label_noise, "Label flip probability");
  synth->add_option("--reference-date", spec.reference_date, "Date account ages are measured at");

  std::string ratings, kappa_out;
  auto* kappa = app.add_subcommand("kappa", "Fleiss' kappa of an annotation matrix");
  kappa->add_option("--ratings,-r", ratings, "One item per line of category counts")->required();
  kappa->add_option("--out,-o", kappa_out, "Write the result as JSON");

  std::uint64_t gc_seed = 7;
  double gc_tol = 1e-4;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference audit of the tiny model");
  gradcheck->add_option("--seed", gc_seed, "Initialization seed");
  gradcheck->add_option("--tolerance", gc_tol, "Maximum accepted relative error");

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    CLI::App* sub = nullptr;
    for (auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kUsageError;
  }

  try {
    if (train->parsed()) return cmd_train(train_flags, out, err);
    if (ablate->parsed()) return cmd_ablate(ablate_flags, variants, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_key, sweep_values, out, err);
    if (evaluate->parsed()) return cmd_evaluate(eval_flags, out);
    if (predict->parsed()) return cmd_predict(predict_flags, out);
    if (preprocess->parsed()) return cmd_preprocess(pre_in, pre_out, pre_config, pre_emoji, pre_report, out);
    if (split->parsed()) return cmd_split(split_data, split_out, split_seed, split_ratios, split_event, split_flat, out);
    if (synth->parsed()) {
      spec.domain_cue = !no_cue;
      return cmd_synth(spec, synth_out, out);
    }
    if (kappa->parsed()) return cmd_kappa(ratings, kappa_out, out);
    if (gradcheck->parsed()) return cmd_gradcheck(gc_seed, gc_tol, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace mdrd::cli
