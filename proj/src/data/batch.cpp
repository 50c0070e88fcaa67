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

#include "mdrd/data/batch.hpp"

#include <algorithm>

#include "mdrd/error.hpp"

namespace mdrd::data {

PaddedTokens pad_and_mask(const Tensor& tokens, std::size_t batch_len, std::size_t max_len) {
  if (tokens.empty() || tokens.rank() != 2) fail("pad_and_mask: post has no tokens");
  if (max_len == 0) fail("pad_and_mask: max_len must be positive");
  const std::size_t n = std::min(tokens.rows(), max_len);
  if (batch_len < n) fail<DimensionError>("pad_and_mask: batch length ", batch_len, " shorter than post length ", n);
  const std::size_t dim = tokens.cols();
  PaddedTokens out{Tensor({batch_len, dim}), std::vector<double>(batch_len, 0.0)};
  std::copy_n(tokens.data().begin(), n * dim, out.tokens.data().begin());
  std::fill_n(out.mask.begin(), n, 1.0);
  return out;
}

Batch collate(std::span<const EmbeddedPost* const> posts, std::size_t max_len) {
  if (posts.empty()) fail("collate: empty batch");
  const std::size_t dim = posts.front()->tokens.cols();
  const std::size_t meta = posts.front()->metadata.size();
  std::size_t len = 0;
  for (const EmbeddedPost* p : posts) {
    if (p->tokens.empty()) fail("collate: post '", p->id, "' has no tokens");
    if (p->tokens.cols() != dim) {
      fail<DimensionError>("collate: post '", p->id, "' has width ", p->tokens.cols(), ", expected ", dim);
    }
    if (p->metadata.size() != meta) {
      fail<DimensionError>("collate: post '", p->id, "' has ", p->metadata.size(), " metadata features, expected ", meta);
    }
    if (p->label != 0 && p->label != 1) fail("collate: post '", p->id, "' has label ", p->label);
    len = std::max(len, std::min(p->tokens.rows(), max_len));
  }

  const std::size_t b = posts.size();
  Batch batch;
  batch.steps.assign(len, Tensor({b, dim}));
  batch.mask = Tensor({b, len});
  if (meta > 0) batch.metadata = Tensor({b, meta});
  for (std::size_t r = 0; r < b; ++r) {
    const EmbeddedPost& p = *posts[r];
    const std::size_t n = std::min(p.tokens.rows(), max_len);
    for (std::size_t t = 0; t < n; ++t) {
      auto src = p.tokens.row(t);
      std::copy(src.begin(), src.end(), batch.steps[t].row(r).begin());
      batch.mask.at(r, t) = 1.0;
    }
    for (std::size_t j = 0; j < meta; ++j) batch.metadata.at(r, j) = p.metadata[j];
    batch.domains.push_back(p.domain);
    batch.labels.push_back(p.label);
  }
  return batch;
}

Batch collate(std::span<const EmbeddedPost> posts, std::size_t max_len) {
  std::vector<const EmbeddedPost*> ptrs;
  ptrs.reserve(posts.size());
  for (const auto& p : posts) ptrs.push_back(&p);
  return collate(ptrs, max_len);
}

}  // namespace mdrd::data
