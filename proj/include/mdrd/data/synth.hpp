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


#ifndef MDRD_DATA_SYNTH_HPP_
#define MDRD_DATA_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdrd/data/embeddings.hpp"
#include "mdrd/data/record.hpp"

namespace mdrd::data {

/// Planted-rule multi-domain corpus. Each post carries either the signal
/// token or the decoy token (s = 1 or 0). Domains alternate between two
/// groups; the clean label is s in even domains and 1 - s in odd ones, so a
/// model that cannot tell the domain is capped at chance on s alone.
struct SyntheticSpec {
  std::size_t num_domains = 6;
  std::size_t samples_per_domain = 400;
  std::vector<std::size_t> domain_sizes;  // overrides samples_per_domain when set
  std::size_t vocab_size = 64;            // filler words
  std::size_t dim = 32;
  std::size_t layers = 4;
  std::size_t min_len = 6;
  std::size_t max_len = 10;
  bool domain_cue = true;       // prepend a per-domain marker token
  bool order_sensitive = false; // signal is the bigram "sig dec", decoy is "dec sig"
  double metadata_signal = 0.0; // shift of follower counts with the clean label
  double label_noise = 0.0;     // probability of flipping the clean label
  double layer_noise = 0.1;     // per-layer Gaussian noise around the base vectors
  std::string reference_date = "2024-01-01";
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticData {
  std::vector<std::string> domains;
  std::vector<PostRecord> records;
  std::vector<EmbeddingRecord> embeddings;
  double bayes_accuracy = 1.0;   // with the domain known
  double domain_blind_cap = 0.5; // best accuracy from s alone
};

SyntheticData synth_generate(const SyntheticSpec& spec);

/// Clean label of the planted rule.
int synth_rule(std::size_t domain, int signal);

nlohmann::ordered_json to_json(const SyntheticSpec& spec);

}  // namespace mdrd::data

#endif  // MDRD_DATA_SYNTH_HPP_
