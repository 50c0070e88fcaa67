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

#include "mdrd/numerics/graph.hpp"

#include <limits>

#include "mdrd/error.hpp"

namespace mdrd::num {

Parameter::Parameter(std::string name_in, Tensor value_in)
    : name(std::move(name_in)), value(std::move(value_in)), grad(value.shape()) {}

Var Graph::constant(Tensor value) {
  Node node;
  node.owned = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Graph::parameter(Parameter& p) {
  Node node;
  node.borrowed = &p.value;
  if (mode_ == GradMode::kEnabled) {
    node.param = &p;
    node.requires_grad = true;
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Graph::emit(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward) {
  return emit(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()), std::move(backward));
}

Var Graph::emit(Tensor value, std::span<const Var> inputs, BackwardFn backward) {
  if (nodes_.size() >= std::numeric_limits<std::uint32_t>::max()) fail("graph node limit reached");
  Node node;
  node.owned = std::move(value);
  if (mode_ == GradMode::kEnabled) {
    for (const Var& in : inputs) {
      if (&in.graph() != this) fail("graph op mixes nodes of different graphs");
      node.requires_grad = node.requires_grad || nodes_[in.id()].requires_grad;
    }
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

const Tensor& Graph::value(std::uint32_t id) const {
  const Node& n = nodes_[id];
  return n.borrowed ? *n.borrowed : n.owned;
}

Tensor& Graph::grad(std::uint32_t id) {
  Node& n = nodes_[id];
  if (n.param) return n.param->grad;
  if (n.grad.empty()) n.grad = Tensor(value(id).shape());
  return n.grad;
}

bool Graph::has_grad(std::uint32_t id) const {
  const Node& n = nodes_[id];
  return n.param != nullptr || !n.grad.empty();
}

void Graph::backward(Var loss) {
  if (&loss.graph() != this) fail("backward called with a foreign node");
  if (mode_ != GradMode::kEnabled) fail("backward on a graph built without gradients");
  if (value(loss.id()).size() != 1) {
    fail<DimensionError>("backward needs a scalar loss, got shape ", to_string(value(loss.id()).shape()));
  }
  if (!nodes_[loss.id()].requires_grad) return;
  grad(loss.id())[0] += 1.0;
  for (std::int64_t id = loss.id(); id >= 0; --id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad || !n.backward || n.grad.empty()) continue;
    n.backward(*this, n.grad);
  }
}

}  // namespace mdrd::num
