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


#ifndef MDRD_MODEL_ADAM_HPP_
#define MDRD_MODEL_ADAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "mdrd/numerics/graph.hpp"

namespace mdrd::model {

/// Adam with coupled L2 weight decay. Moments are kept per parameter in the
/// order the parameters were registered.
class AdamState {
 public:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  AdamState() = default;
  explicit AdamState(std::span<num::Parameter* const> params);

  std::uint64_t step_count() const { return t_; }
  const std::vector<num::Tensor>& first_moments() const { return m_; }
  const std::vector<num::Tensor>& second_moments() const { return v_; }

  /// One update of every parameter; gradients are zeroed afterwards.
  /// Fails naming the parameter if any gradient is NaN, before anything moves.
  void step(std::span<num::Parameter* const> params, double lr, double weight_decay);

 private:
  std::uint64_t t_ = 0;
  std::vector<num::Tensor> m_;
  std::vector<num::Tensor> v_;
};

}  // namespace mdrd::model

#endif  // MDRD_MODEL_ADAM_HPP_
