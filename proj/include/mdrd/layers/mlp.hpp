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

#ifndef MDRD_LAYERS_MLP_HPP_
#define MDRD_LAYERS_MLP_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "mdrd/layers/common.hpp"
#include "mdrd/numerics/ops.hpp"

namespace mdrd::layers {

/// Inverted dropout. Eval mode and p = 0 return `x` itself.
Var dropout(Var x, double p, SeededRng& rng, Mode mode);

/// Value-level dropout.
Tensor dropout(const Tensor& x, double p, SeededRng& rng, Mode mode);

/// Feed-forward stack: widths = {in, hidden..., out}. Hidden layers apply
/// affine -> activation -> dropout; the last layer is affine only.
struct MlpParams {
  MlpParams(const std::string& prefix, std::vector<std::size_t> widths, num::Activation activation,
            double dropout_rate, SeededRng& rng);

  std::vector<std::size_t> widths;
  num::Activation activation;
  double dropout_rate;
  std::vector<Parameter> weights;  // [in x out] per layer
  std::vector<Parameter> biases;

  std::size_t input_dim() const { return widths.front(); }
  std::size_t output_dim() const { return widths.back(); }
  void collect(std::vector<Parameter*>& out);
};

/// `rng` may be null in eval mode.
Var mlp_forward(Var v, MlpParams& params, SeededRng* rng, Mode mode);

}  // namespace mdrd::layers

#endif  // MDRD_LAYERS_MLP_HPP_
