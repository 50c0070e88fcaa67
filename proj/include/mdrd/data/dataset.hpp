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


#ifndef MDRD_DATA_DATASET_HPP_
#define MDRD_DATA_DATASET_HPP_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdrd/data/batch.hpp"
#include "mdrd/data/embeddings.hpp"
#include "mdrd/data/record.hpp"
#include "mdrd/data/text_clean.hpp"
#include "mdrd/data/zscore.hpp"

namespace mdrd::data {

struct PreprocessStats {
  std::size_t input = 0;
  std::size_t dropped_metadata = 0;
  std::size_t dropped_empty = 0;
  std::size_t dropped_duplicate = 0;
  std::size_t kept = 0;
};

struct PreprocessResult {
  std::vector<PostRecord> records;
  PreprocessStats stats;
};

/// Drops records without complete metadata, cleans the text, drops posts
/// that clean to nothing, and keeps the first post of every cleaned text.
PreprocessResult preprocess(std::span<const PostRecord> records, const CleanOptions& options = {});

nlohmann::ordered_json to_json(const PreprocessStats& stats);

/// Number of metadata features a record provides.
inline constexpr std::size_t kMetadataFeatures = 3;

/// [repost_count, follower_count, account age in days at reference_date].
std::vector<double> raw_metadata(const PostRecord& record, const std::string& reference_date);

/// Statistics over the metadata of records[indices]; labelled with `split`.
ZScoreStats fit_metadata(std::span<const PostRecord> records, std::span<const std::size_t> indices,
                         const std::string& reference_date, const std::string& split = "train");

/// Sorted distinct domain names.
std::vector<std::string> domains_of(std::span<const PostRecord> records);

struct AssemblyOptions {
  std::vector<std::string> domains;   // index = domain id
  std::size_t embedding_layers = 4;   // k of the last-k layer mean; ignored for pre-fused files
  std::size_t metadata_dim = kMetadataFeatures;  // 0 disables metadata
  std::string reference_date = "2024-01-01";
};

/// Model inputs for records[indices]. `stats` is required when metadata is on.
std::vector<EmbeddedPost> assemble(std::span<const PostRecord> records, std::span<const std::size_t> indices,
                                   const EmbeddingFile& embeddings, const AssemblyOptions& options,
                                   const ZScoreStats* stats);

}  // namespace mdrd::data

#endif  // MDRD_DATA_DATASET_HPP_
