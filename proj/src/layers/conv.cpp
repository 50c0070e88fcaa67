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

#include "mdrd/layers/conv.hpp"

#include <algorithm>

#include "mdrd/error.hpp"
#include "mdrd/numerics/ops.hpp"

namespace mdrd::layers {

ConvBank::ConvBank(const std::string& prefix, std::size_t input_dim_in, std::vector<std::size_t> widths_in,
                   std::size_t filters_in, SeededRng& rng)
    : input_dim(input_dim_in), widths(std::move(widths_in)), filters(filters_in) {
  if (widths.empty() || filters == 0 || input_dim == 0) fail("ConvBank needs widths, filters and input width");
  for (std::size_t w : widths) {
    if (w == 0) fail("ConvBank: kernel widths must be >= 1");
    const std::string name = prefix + ".w" + std::to_string(w);
    weights.emplace_back(name + ".kernel", xavier_uniform({w * input_dim, filters}, w * input_dim, filters, rng));
    biases.emplace_back(name + ".bias", Tensor({filters}));
  }
}

std::size_t ConvBank::max_width() const { return *std::max_element(widths.begin(), widths.end()); }

void ConvBank::collect(std::vector<Parameter*>& out) {
  for (std::size_t i = 0; i < widths.size(); ++i) {
    out.push_back(&weights[i]);
    out.push_back(&biases[i]);
  }
}

Var conv_max_pool(const std::vector<Var>& steps, const Tensor& mask, ConvBank& bank) {
  if (steps.empty()) fail("conv_max_pool: empty sequence");
  Graph& g = steps.front().graph();
  const std::size_t batch = steps.front().value().rows();
  if (steps.front().value().cols() != bank.input_dim) {
    fail<DimensionError>("conv_max_pool: input width ", steps.front().value().cols(), " but bank expects ",
                         bank.input_dim);
  }
  if (mask.rows() != batch || mask.cols() != steps.size()) {
    fail<DimensionError>("conv_max_pool: mask ", num::to_string(mask.shape()), " vs ", steps.size(), " steps of batch ",
                         batch);
  }
  const std::size_t widest = bank.max_width();
  // Masked positions count as zero padding whatever they hold.
  std::vector<Var> padded = steps;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    bool any_masked = false;
    for (std::size_t r = 0; r < batch; ++r) any_masked |= mask.at(r, t) == 0.0;
    if (!any_masked) continue;
    Tensor keep({batch, bank.input_dim});
    for (std::size_t r = 0; r < batch; ++r) {
      for (std::size_t d = 0; d < bank.input_dim; ++d) keep.at(r, d) = mask.at(r, t);
    }
    padded[t] = num::mul(steps[t], g.constant(std::move(keep)));
  }
  if (padded.size() < widest) {
    const Var zero = g.constant(Tensor({batch, bank.input_dim}));
    padded.resize(widest, zero);
  }
  const std::size_t n = padded.size();
  const auto lengths = effective_lengths(mask);

  std::vector<Var> features;
  features.reserve(bank.widths.size());
  for (std::size_t wi = 0; wi < bank.widths.size(); ++wi) {
    const std::size_t w = bank.widths[wi];
    if (n < w) fail("conv_max_pool: sequence of ", n, " positions shorter than kernel width ", w);
    const Var kernel = g.parameter(bank.weights[wi]);
    const Var bias = g.parameter(bank.biases[wi]);
    const std::size_t windows = n - w + 1;
    Tensor valid({batch, windows});
    for (std::size_t r = 0; r < batch; ++r) {
      const std::size_t limit = std::max(lengths[r], widest);
      for (std::size_t t = 0; t < windows; ++t) valid.at(r, t) = t + w <= limit ? 1.0 : 0.0;
    }
    std::vector<Var> responses;
    responses.reserve(windows);
    for (std::size_t t = 0; t < windows; ++t) {
      const Var window = w == 1 ? padded[t] : num::concat_cols(std::span<const Var>(padded.data() + t, w));
      responses.push_back(num::activate(num::affine(window, kernel, bias), num::Activation::kRelu));
    }
    features.push_back(num::masked_max(responses, valid));
  }
  return features.size() == 1 ? features.front() : num::concat_cols(features);
}

}  // namespace mdrd::layers
