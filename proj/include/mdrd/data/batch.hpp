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

#ifndef MDRD_DATA_BATCH_HPP_
#define MDRD_DATA_BATCH_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mdrd/numerics/tensor.hpp"

namespace mdrd::data {

using num::Tensor;

/// Model input unit: fused token embeddings plus side information.
struct EmbeddedPost {
  std::string id;
  Tensor tokens;                  // [n x D], n >= 1
  std::size_t domain = 0;         // index into the configured domain list
  std::vector<double> metadata;   // z-scored, width M
  int label = 0;                  // 1 = rumor
};

struct PaddedTokens {
  Tensor tokens;              // [len x D]
  std::vector<double> mask;   // 1 for real rows, 0 for padding
};

/// Truncates to the first `max_len` rows, then right-pads with zero rows up
/// to `batch_len` (which must be >= the truncated length).
PaddedTokens pad_and_mask(const Tensor& tokens, std::size_t batch_len, std::size_t max_len = 170);

/// A padded mini-batch laid out position-major for the recurrent layers.
struct Batch {
  std::vector<Tensor> steps;        // n tensors of [B x D]
  Tensor mask;                      // [B x n]
  std::vector<std::size_t> domains;
  Tensor metadata;                  // [B x M]; empty when M = 0
  std::vector<int> labels;

  std::size_t size() const { return domains.size(); }
  std::size_t length() const { return steps.size(); }
};

/// Pads every post to the longest (truncated) post of the batch.
Batch collate(std::span<const EmbeddedPost* const> posts, std::size_t max_len);
Batch collate(std::span<const EmbeddedPost> posts, std::size_t max_len);

}  // namespace mdrd::data

#endif  // MDRD_DATA_BATCH_HPP_
