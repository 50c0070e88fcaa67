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

#include "mdrd/layers/mlp.hpp"

#include "mdrd/error.hpp"

namespace mdrd::layers {

namespace {

void check_rate(double p) {
  if (!(p >= 0.0 && p < 1.0)) fail("dropout rate must satisfy 0 <= p < 1, got ", p);
}

Tensor dropout_mask(const num::Shape& shape, double p, SeededRng& rng) {
  Tensor mask(shape);
  const double keep = 1.0 - p;
  const double scale = 1.0 / keep;
  for (double& m : mask.data()) m = rng.uniform() < keep ? scale : 0.0;
  return mask;
}

}  // namespace

Var dropout(Var x, double p, SeededRng& rng, Mode mode) {
  check_rate(p);
  if (mode == Mode::kEval || p == 0.0) return x;
  const Var mask = x.graph().constant(dropout_mask(x.value().shape(), p, rng));
  return num::mul(x, mask);
}

Tensor dropout(const Tensor& x, double p, SeededRng& rng, Mode mode) {
  check_rate(p);
  if (mode == Mode::kEval || p == 0.0) return x;
  Tensor out = dropout_mask(x.shape(), p, rng);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= x[i];
  return out;
}

MlpParams::MlpParams(const std::string& prefix, std::vector<std::size_t> widths_in, num::Activation activation_in,
                     double dropout_rate_in, SeededRng& rng)
    : widths(std::move(widths_in)), activation(activation_in), dropout_rate(dropout_rate_in) {
  check_rate(dropout_rate);
  if (widths.size() < 2) fail("MLP needs at least input and output widths");
  for (std::size_t w : widths) {
    if (w == 0) fail("MLP widths must be positive");
  }
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::string name = prefix + ".l" + std::to_string(l);
    weights.emplace_back(name + ".w", xavier_uniform({widths[l], widths[l + 1]}, widths[l], widths[l + 1], rng));
    biases.emplace_back(name + ".b", Tensor({widths[l + 1]}));
  }
}

void MlpParams::collect(std::vector<Parameter*>& out) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    out.push_back(&weights[l]);
    out.push_back(&biases[l]);
  }
}

Var mlp_forward(Var v, MlpParams& params, SeededRng* rng, Mode mode) {
  if (v.value().cols() != params.input_dim()) {
    fail<DimensionError>("mlp_forward: input width ", v.value().cols(), " but MLP expects ", params.input_dim());
  }
  if (mode == Mode::kTrain && params.dropout_rate > 0.0 && rng == nullptr) {
    fail("mlp_forward: training-mode dropout needs an rng");
  }
  Graph& g = v.graph();
  Var h = v;
  const std::size_t layers = params.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    h = num::affine(h, g.parameter(params.weights[l]), g.parameter(params.biases[l]));
    if (l + 1 < layers) {
      h = num::activate(h, params.activation);
      if (mode == Mode::kTrain && params.dropout_rate > 0.0) h = dropout(h, params.dropout_rate, *rng, mode);
    }
  }
  return h;
}

}  // namespace mdrd::layers
