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

#ifndef MDRD_LAYERS_COMMON_HPP_
#define MDRD_LAYERS_COMMON_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "mdrd/numerics/graph.hpp"
#include "mdrd/numerics/rng.hpp"
#include "mdrd/numerics/tensor.hpp"

namespace mdrd::layers {

using num::Graph;
using num::Parameter;
using num::SeededRng;
using num::Tensor;
using num::Var;

enum class Mode { kTrain, kEval };

/// A padded batch of token sequences inside a graph.
struct Sequence {
  std::vector<Var> steps;  // one [B x D] node per position
  Tensor mask;             // [B x n]; 1 marks a real token

  std::size_t length() const { return steps.size(); }
  std::size_t batch() const { return mask.rows(); }
};

/// Wraps per-position token matrices and a mask as graph constants.
Sequence make_sequence(Graph& g, const std::vector<Tensor>& steps, const Tensor& mask);

/// Throws "empty sequence" when some row of the mask has no unmasked entry.
void require_nonempty_rows(const Tensor& mask, const char* op);

/// Per row: index of the last unmasked position plus one.
std::vector<std::size_t> effective_lengths(const Tensor& mask);

/// Uniform in +-sqrt(6 / (fan_in + fan_out)).
Tensor xavier_uniform(num::Shape shape, std::size_t fan_in, std::size_t fan_out, SeededRng& rng);
Tensor uniform_tensor(num::Shape shape, double bound, SeededRng& rng);

}  // namespace mdrd::layers

#endif  // MDRD_LAYERS_COMMON_HPP_
