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


#include "mdrd/model/adam.hpp"

#include <cmath>

#include "mdrd/error.hpp"

namespace mdrd::model {

AdamState::AdamState(std::span<num::Parameter* const> params) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const num::Parameter* p : params) {
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

void AdamState::step(std::span<num::Parameter* const> params, double lr, double weight_decay) {
  if (params.size() != m_.size()) {
    fail<DimensionError>("adam_step: state tracks ", m_.size(), " parameters, got ", params.size());
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const num::Parameter& p = *params[k];
    if (!p.value.same_shape(m_[k])) {
      fail<DimensionError>("adam_step: parameter '", p.name, "' changed shape");
    }
    for (double g : p.grad.data()) {
      if (std::isnan(g)) fail("adam_step: NaN gradient in parameter '", p.name, "'");
    }
  }

  ++t_;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    num::Parameter& p = *params[k];
    auto value = p.value.data();
    auto grad = p.grad.data();
    auto m = m_[k].data();
    auto v = v_[k].data();
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double g = grad[i] + weight_decay * value[i];
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      value[i] -= lr * m_hat / (std::sqrt(v_hat) + kEpsilon);
    }
    p.zero_grad();
  }
}

}  // namespace mdrd::model
