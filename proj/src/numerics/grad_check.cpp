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

#include "mdrd/numerics/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mdrd/error.hpp"

namespace mdrd::num {

namespace {

double evaluate(const LossBuilder& build) {
  Graph g(GradMode::kDisabled);
  const Var loss = build(g);
  if (loss.value().size() != 1) fail<DimensionError>("grad_check: loss must be scalar");
  return loss.value()[0];
}

}  // namespace

GradCheckResult grad_check(const LossBuilder& build, std::span<Parameter* const> params, double eps) {
  if (!(eps > 0.0)) fail("grad_check: step must be positive");
  for (Parameter* p : params) p->zero_grad();

  double base = 0.0;
  {
    Graph g;
    const Var loss = build(g);
    base = loss.value()[0];
    g.backward(loss);
  }
  if (evaluate(build) != base) fail("grad_check: loss function is not deterministic");

  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) {
    analytic.push_back(p->grad);
    p->zero_grad();
  }

  GradCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + eps;
      const double plus = evaluate(build);
      p.value[i] = saved - eps;
      const double minus = evaluate(build);
      p.value[i] = saved;

      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = analytic[k][i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
      ++result.checked;
      if (rel > result.max_rel_error || result.worst_parameter.empty()) {
        result.max_rel_error = std::max(result.max_rel_error, rel);
        if (rel >= result.max_rel_error) {
          result.worst_parameter = p.name;
          result.worst_index = i;
          result.worst_analytic = a;
          result.worst_numeric = numeric;
        }
      }
    }
  }
  return result;
}

}  // namespace mdrd::num
