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

#include "mdrd/layers/common.hpp"

#include <cmath>

#include "mdrd/error.hpp"

namespace mdrd::layers {

Sequence make_sequence(Graph& g, const std::vector<Tensor>& steps, const Tensor& mask) {
  if (steps.empty()) fail("empty sequence");
  if (mask.rank() != 2 || mask.cols() != steps.size()) {
    fail<DimensionError>("sequence mask ", num::to_string(mask.shape()), " does not cover ", steps.size(), " steps");
  }
  Sequence seq;
  seq.mask = mask;
  seq.steps.reserve(steps.size());
  for (const Tensor& s : steps) {
    if (s.rank() != 2 || s.rows() != mask.rows()) {
      fail<DimensionError>("sequence step ", num::to_string(s.shape()), " does not match batch ", mask.rows());
    }
    seq.steps.push_back(g.constant(s));
  }
  return seq;
}

void require_nonempty_rows(const Tensor& mask, const char* op) {
  for (std::size_t r = 0; r < mask.rows(); ++r) {
    bool any = false;
    for (double m : mask.row(r)) {
      if (m != 0.0 && m != 1.0) fail(op, ": mask entries must be 0 or 1");
      any = any || m != 0.0;
    }
    if (!any) fail(op, ": empty sequence (row ", r, " fully masked)");
  }
}

std::vector<std::size_t> effective_lengths(const Tensor& mask) {
  std::vector<std::size_t> out(mask.rows(), 0);
  for (std::size_t r = 0; r < mask.rows(); ++r) {
    auto row = mask.row(r);
    for (std::size_t t = row.size(); t > 0; --t) {
      if (row[t - 1] != 0.0) {
        out[r] = t;
        break;
      }
    }
  }
  return out;
}

Tensor xavier_uniform(num::Shape shape, std::size_t fan_in, std::size_t fan_out, SeededRng& rng) {
  return uniform_tensor(std::move(shape), std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)), rng);
}

Tensor uniform_tensor(num::Shape shape, double bound, SeededRng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.uniform(-bound, bound);
  return t;
}

}  // namespace mdrd::layers
