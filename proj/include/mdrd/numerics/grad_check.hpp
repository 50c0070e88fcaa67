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

#ifndef MDRD_NUMERICS_GRAD_CHECK_HPP_
#define MDRD_NUMERICS_GRAD_CHECK_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "mdrd/numerics/graph.hpp"

namespace mdrd::num {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;  // scalar parameters compared
};

/// Builds a scalar loss on the given graph from the current parameter values.
using LossBuilder = std::function<Var(Graph&)>;

/// Compares backprop gradients with central differences
/// (L(p + eps) - L(p - eps)) / (2 eps) for every scalar of every parameter.
/// The relative error of one scalar is |a - n| / max(|a|, |n|, 1e-8); the
/// worst one is returned. Throws if two identical loss evaluations differ,
/// i.e. the builder is not deterministic. Parameter grads are left zeroed.
GradCheckResult grad_check(const LossBuilder& build, std::span<Parameter* const> params, double eps = 1e-5);

}  // namespace mdrd::num

#endif  // MDRD_NUMERICS_GRAD_CHECK_HPP_
