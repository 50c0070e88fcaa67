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

#ifndef MDRD_LAYERS_ATTENTION_HPP_
#define MDRD_LAYERS_ATTENTION_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "mdrd/layers/common.hpp"

namespace mdrd::layers {

/// Single-query additive attention: score_t = u . tanh(w_t A + b).
struct AttentionPoolingParams {
  AttentionPoolingParams(const std::string& prefix, std::size_t token_dim, std::size_t attention_dim,
                         SeededRng& rng);

  std::size_t token_dim;
  std::size_t attention_dim;
  Parameter a;  // [D x Da]
  Parameter b;  // [Da]
  Parameter u;  // [Da x 1]

  void collect(std::vector<Parameter*>& out);
};

struct AttentionOutput {
  Var pooled;   // [B x D]
  Var weights;  // [B x n], zero at masked positions
};

/// Masked attention pooling of a token sequence into one vector per row.
AttentionOutput attention_pool(const Sequence& seq, AttentionPoolingParams& params);

}  // namespace mdrd::layers

#endif  // MDRD_LAYERS_ATTENTION_HPP_
