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


#include "mdrd/data/dataset.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "mdrd/error.hpp"

namespace mdrd::data {

PreprocessResult preprocess(std::span<const PostRecord> records, const CleanOptions& options) {
  PreprocessResult out;
  out.stats.input = records.size();
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (!r.metadata) {
      ++out.stats.dropped_metadata;
      continue;
    }
    auto cleaned = clean_text(r.text, options);
    if (!cleaned) {
      ++out.stats.dropped_empty;
      continue;
    }
    if (!seen.insert(*cleaned).second) {
      ++out.stats.dropped_duplicate;
      continue;
    }
    PostRecord kept = r;
    kept.text = std::move(*cleaned);
    out.records.push_back(std::move(kept));
  }
  out.stats.kept = out.records.size();
  return out;
}

nlohmann::ordered_json to_json(const PreprocessStats& s) {
  nlohmann::ordered_json j;
  j["input"] = s.input;
  j["dropped_metadata"] = s.dropped_metadata;
  j["dropped_empty"] = s.dropped_empty;
  j["dropped_duplicate"] = s.dropped_duplicate;
  j["kept"] = s.kept;
  return j;
}

std::vector<double> raw_metadata(const PostRecord& r, const std::string& reference_date) {
  if (!r.metadata) fail("record '", r.id, "' has no metadata");
  return {static_cast<double>(r.metadata->repost_count), static_cast<double>(r.metadata->follower_count),
          account_age_days(r.metadata->account_created_at, reference_date)};
}

ZScoreStats fit_metadata(std::span<const PostRecord> records, std::span<const std::size_t> indices,
                         const std::string& reference_date, const std::string& split) {
  std::vector<std::vector<double>> rows;
  rows.reserve(indices.size());
  for (std::size_t i : indices) rows.push_back(raw_metadata(records[i], reference_date));
  return zscore_fit(rows, split);
}

std::vector<std::string> domains_of(std::span<const PostRecord> records) {
  std::set<std::string> names;
  for (const auto& r : records) names.insert(r.domain);
  return {names.begin(), names.end()};
}

std::vector<EmbeddedPost> assemble(std::span<const PostRecord> records, std::span<const std::size_t> indices,
                                   const EmbeddingFile& embeddings, const AssemblyOptions& options,
                                   const ZScoreStats* stats) {
  if (options.metadata_dim != 0 && options.metadata_dim != kMetadataFeatures) {
    fail<ConfigError>("metadata_dim must be 0 or ", kMetadataFeatures, ", got ", options.metadata_dim);
  }
  if (options.metadata_dim > 0 && (!stats || stats->features() != kMetadataFeatures)) {
    fail("assemble: metadata statistics are required");
  }
  std::vector<std::string> ids;
  ids.reserve(indices.size());
  for (std::size_t i : indices) ids.push_back(records[i].id);
  const auto selected = select_embeddings(embeddings, ids);

  std::vector<EmbeddedPost> out;
  out.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const PostRecord& r = records[indices[k]];
    const auto it = std::find(options.domains.begin(), options.domains.end(), r.domain);
    if (it == options.domains.end()) fail("record '", r.id, "' has unknown domain '", r.domain, "'");
    EmbeddedPost post;
    post.id = r.id;
    const auto& layers = selected[k].layers;
    post.tokens = layers.size() == 1 ? layers.front() : mean_last_k_layers(layers, options.embedding_layers);
    post.domain = static_cast<std::size_t>(it - options.domains.begin());
    if (options.metadata_dim > 0) post.metadata = zscore_apply(raw_metadata(r, options.reference_date), *stats);
    post.label = r.label;
    out.push_back(std::move(post));
  }
  return out;
}

}  // namespace mdrd::data
