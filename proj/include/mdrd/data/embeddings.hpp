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


#ifndef MDRD_DATA_EMBEDDINGS_HPP_
#define MDRD_DATA_EMBEDDINGS_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mdrd/numerics/tensor.hpp"

namespace mdrd::data {

using num::Tensor;

inline constexpr char kEmbeddingMagic[] = "MDRD-EMB1";
inline constexpr std::uint32_t kEmbeddingVersion = 1;

/// Per-post hidden states: `layers` holds L matrices [n x D], oldest layer
/// first. A file with L = 1 carries pre-fused matrices.
struct EmbeddingRecord {
  std::string id;
  std::vector<Tensor> layers;
};

struct EmbeddingHeader {
  std::uint32_t version = kEmbeddingVersion;
  std::uint32_t dim = 0;
  std::uint32_t layers = 0;
};

struct EmbeddingFile {
  EmbeddingHeader header;
  std::vector<EmbeddingRecord> records;
  std::unordered_map<std::string, std::size_t> index;  // id -> position

  const EmbeddingRecord& at(const std::string& id) const;
};

/// Values are stored as little-endian f32, so round trips are exact for
/// values that are representable in single precision.
std::string embedding_bytes(std::uint32_t dim, std::uint32_t layers, std::span<const EmbeddingRecord> records);
EmbeddingFile parse_embeddings(const std::string& bytes);

void embedding_write(const std::filesystem::path& path, std::uint32_t dim, std::uint32_t layers,
                     std::span<const EmbeddingRecord> records);
EmbeddingFile embedding_read_all(const std::filesystem::path& path);

/// Reads only the fixed header (for validation before anything is built).
EmbeddingHeader embedding_header(const std::filesystem::path& path);

/// Records for `ids` in the given order; fails listing up to 10 missing ids.
std::vector<EmbeddingRecord> select_embeddings(const EmbeddingFile& file, std::span<const std::string> ids);
std::vector<EmbeddingRecord> embedding_read(const std::filesystem::path& path, std::span<const std::string> ids);

/// Fails when the file's token width differs from what the model expects.
void require_embedding_dim(const EmbeddingHeader& header, std::size_t expected_dim);

/// Element-wise mean of the last k layers.
Tensor mean_last_k_layers(std::span<const Tensor> layers, std::size_t k);

}  // namespace mdrd::data

#endif  // MDRD_DATA_EMBEDDINGS_HPP_
