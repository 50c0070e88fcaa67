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


#include "mdrd/data/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "mdrd/error.hpp"
#include "mdrd/numerics/rng.hpp"

namespace mdrd::data {

namespace {

constexpr std::uint64_t kVocabStream = 1;
constexpr std::uint64_t kSampleStream = 1000;

std::string iso_date_minus(const std::string& reference, long days) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (std::sscanf(reference.c_str(), "%d-%u-%u", &y, &m, &d) != 3) fail("synth: bad reference date '", reference, "'");
  const std::chrono::sys_days ref{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
  const std::chrono::year_month_day out{ref - std::chrono::days{days}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(out.year()), static_cast<unsigned>(out.month()),
                static_cast<unsigned>(out.day()));
  return buf;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (num_domains == 0) fail("synth: at least one domain is required");
  std::size_t total = 0;
  if (!domain_sizes.empty()) {
    if (domain_sizes.size() != num_domains) fail("synth: ", domain_sizes.size(), " domain sizes for ", num_domains, " domains");
    for (auto s : domain_sizes) total += s;
  } else {
    total = samples_per_domain * num_domains;
  }
  if (total == 0) fail("synth: spec produces zero samples");
  if (dim == 0 || layers == 0 || vocab_size == 0) fail("synth: dim, layers and vocab_size must be positive");
  if (min_len < 2 || max_len < min_len) fail("synth: need 2 <= min_len <= max_len");
  if (!(label_noise >= 0.0 && label_noise <= 0.5)) fail("synth: label_noise must be in [0, 0.5]");
  if (!(layer_noise >= 0.0)) fail("synth: layer_noise must be non-negative");
}

int synth_rule(std::size_t domain, int signal) { return (signal ^ static_cast<int>(domain % 2)) & 1; }

SyntheticData synth_generate(const SyntheticSpec& spec) {
  spec.validate();
  const num::SeededRng root(spec.seed);
  const std::size_t dim = spec.dim;

  // Vocabulary: fillers, then "sig", "dec", then one cue per domain.
  const std::size_t sig = spec.vocab_size, dec = sig + 1, cue0 = sig + 2;
  std::vector<std::vector<double>> base(cue0 + spec.num_domains, std::vector<double>(dim));
  num::SeededRng vocab_rng = root.derive(kVocabStream);
  for (auto& v : base) {
    for (double& x : v) x = vocab_rng.normal();
  }
  auto word = [&](std::size_t t) -> std::string {
    if (t < sig) return "w" + std::to_string(t);
    if (t == sig) return "sig";
    if (t == dec) return "dec";
    return "cue" + std::to_string(t - cue0);
  };

  SyntheticData out;
  for (std::size_t d = 0; d < spec.num_domains; ++d) out.domains.push_back("domain" + std::to_string(d));

  std::uint64_t global = 0;
  std::vector<double> weights(spec.num_domains);
  std::size_t total = 0;
  for (std::size_t d = 0; d < spec.num_domains; ++d) {
    const std::size_t count = spec.domain_sizes.empty() ? spec.samples_per_domain : spec.domain_sizes[d];
    weights[d] = static_cast<double>(count);
    total += count;
    for (std::size_t i = 0; i < count; ++i, ++global) {
      num::SeededRng rng = root.derive(kSampleStream + global);
      const int s = static_cast<int>(i % 2);
      const std::size_t len = spec.min_len + rng.below(spec.max_len - spec.min_len + 1);

      std::vector<std::size_t> tokens(len);
      for (auto& t : tokens) t = rng.below(spec.vocab_size);
      const std::size_t pos = rng.below(len - 1);
      if (spec.order_sensitive) {
        tokens[pos] = s ? sig : dec;
        tokens[pos + 1] = s ? dec : sig;
      } else {
        tokens[pos] = s ? sig : dec;
      }
      const int clean = synth_rule(d, s);
      const bool flip = spec.label_noise > 0.0 && rng.uniform() < spec.label_noise;
      const int label = flip ? 1 - clean : clean;

      PostRecord rec;
      rec.id = "s" + std::to_string(d) + "-" + std::to_string(i);
      rec.domain = out.domains[d];
      rec.label = label;
      rec.event_id = "event-" + std::to_string(d) + "-" + std::to_string(i % 4);
      const double reposts = std::exp(2.0 + rng.normal());
      const double followers =
          std::max(0.0, 1000.0 * (1.0 + 0.3 * rng.normal() + spec.metadata_signal * (clean ? 1.0 : -1.0)));
      const long age = 30 + static_cast<long>(rng.below(3000));
      rec.metadata = RawMetadata{static_cast<std::uint64_t>(std::llround(reposts)),
                                 static_cast<std::uint64_t>(std::llround(followers)),
                                 iso_date_minus(spec.reference_date, age)};

      // Per-layer noisy copies of the base vectors. The cue token is drawn
      // last so that the cue-free corpus shares every other value.
      std::vector<std::size_t> seq = tokens;
      std::vector<std::vector<double>> noise(spec.layers, std::vector<double>(len * dim));
      for (auto& layer : noise) {
        for (double& x : layer) x = spec.layer_noise * rng.normal();
      }
      std::vector<std::vector<double>> cue_noise(spec.layers, std::vector<double>(dim));
      for (auto& layer : cue_noise) {
        for (double& x : layer) x = spec.layer_noise * rng.normal();
      }

      EmbeddingRecord emb;
      emb.id = rec.id;
      const std::size_t n = len + (spec.domain_cue ? 1 : 0);
      for (std::size_t l = 0; l < spec.layers; ++l) {
        std::vector<double> values;
        values.reserve(n * dim);
        if (spec.domain_cue) {
          for (std::size_t k = 0; k < dim; ++k) values.push_back(base[cue0 + d][k] + cue_noise[l][k]);
        }
        for (std::size_t t = 0; t < len; ++t) {
          for (std::size_t k = 0; k < dim; ++k) values.push_back(base[seq[t]][k] + noise[l][t * dim + k]);
        }
        // Stored as f32 on disk; round here so in-memory and on-disk agree.
        for (double& v : values) v = static_cast<double>(static_cast<float>(v));
        emb.layers.push_back(num::Tensor({n, dim}, std::move(values)));
      }

      std::string text = spec.domain_cue ? word(cue0 + d) : "";
      for (std::size_t t : seq) text += (text.empty() ? "" : " ") + word(t);
      rec.text = std::move(text);
      out.records.push_back(std::move(rec));
      out.embeddings.push_back(std::move(emb));
    }
  }

  // Closed forms: the clean label is a function of (domain, s), so knowing
  // both leaves only the flip noise. Without the domain, for each s the best
  // guess is the label most domains assign.
  out.bayes_accuracy = 1.0 - spec.label_noise;
  double cap = 0.0;
  for (int s = 0; s <= 1; ++s) {
    double rumor = 0.0, nonrumor = 0.0;
    for (std::size_t d = 0; d < spec.num_domains; ++d) {
      const double count = weights[d];
      // s = i % 2, so s = 0 takes the extra sample of an odd-sized domain.
      const double with_s = s == 0 ? std::ceil(count / 2.0) : std::floor(count / 2.0);
      const double p_clean = static_cast<double>(synth_rule(d, s));
      const double p = p_clean * (1.0 - spec.label_noise) + (1.0 - p_clean) * spec.label_noise;
      rumor += with_s * p;
      nonrumor += with_s * (1.0 - p);
    }
    cap += std::max(rumor, nonrumor);
  }
  cap /= static_cast<double>(total);
  out.domain_blind_cap = cap;
  return out;
}

nlohmann::ordered_json to_json(const SyntheticSpec& s) {
  nlohmann::ordered_json j;
  j["num_domains"] = s.num_domains;
  j["samples_per_domain"] = s.samples_per_domain;
  j["domain_sizes"] = s.domain_sizes;
  j["vocab_size"] = s.vocab_size;
  j["dim"] = s.dim;
  j["layers"] = s.layers;
  j["min_len"] = s.min_len;
  j["max_len"] = s.max_len;
  j["domain_cue"] = s.domain_cue;
  j["order_sensitive"] = s.order_sensitive;
  j["metadata_signal"] = s.metadata_signal;
  j["label_noise"] = s.label_noise;
  j["layer_noise"] = s.layer_noise;
  j["reference_date"] = s.reference_date;
  j["seed"] = s.seed;
  return j;
}

}  // namespace mdrd::data
