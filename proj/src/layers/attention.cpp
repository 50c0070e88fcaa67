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

#include "mdrd/layers/attention.hpp"

#include "mdrd/error.hpp"
#include "mdrd/numerics/ops.hpp"

namespace mdrd::layers {

AttentionPoolingParams::AttentionPoolingParams(const std::string& prefix, std::size_t token_dim_in,
                                               std::size_t attention_dim_in, SeededRng& rng)
    : token_dim(token_dim_in),
      attention_dim(attention_dim_in),
      a(prefix + ".a", xavier_uniform({token_dim_in, attention_dim_in}, token_dim_in, attention_dim_in, rng)),
      b(prefix + ".b", Tensor({attention_dim_in})),
      u(prefix + ".u", xavier_uniform({attention_dim_in, 1}, attention_dim_in, 1, rng)) {}

void AttentionPoolingParams::collect(std::vector<Parameter*>& out) {
  out.push_back(&a);
  out.push_back(&b);
  out.push_back(&u);
}

AttentionOutput attention_pool(const Sequence& seq, AttentionPoolingParams& params) {
  if (seq.steps.empty()) fail("attention_pool: empty sequence");
  require_nonempty_rows(seq.mask, "attention_pool");
  if (seq.steps.front().value().cols() != params.token_dim) {
    fail<DimensionError>("attention_pool: token width ", seq.steps.front().value().cols(), " but parameters expect ",
                         params.token_dim);
  }
  Graph& g = seq.steps.front().graph();
  const Var a = g.parameter(params.a);
  const Var b = g.parameter(params.b);
  const Var u = g.parameter(params.u);

  std::vector<Var> scores;
  scores.reserve(seq.length());
  for (const Var& token : seq.steps) {
    scores.push_back(num::matmul(num::activate(num::affine(token, a, b), num::Activation::kTanh), u));
  }
  const Var alpha = num::masked_softmax_rows(num::concat_cols(scores), seq.mask);

  std::vector<Var> terms;
  terms.reserve(seq.length());
  for (std::size_t t = 0; t < seq.length(); ++t) terms.push_back(num::scale_rows(seq.steps[t], alpha, t));
  return {num::add_n(terms), alpha};
}

}  // namespace mdrd::layers
