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

#ifndef MDRD_NUMERICS_GRAPH_HPP_
#define MDRD_NUMERICS_GRAPH_HPP_

#include <cstdint>
#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>

#include "mdrd/numerics/tensor.hpp"

namespace mdrd::num {

/// A named learnable tensor with its accumulated gradient.
struct Parameter {
  Parameter(std::string name, Tensor value);

  std::string name;
  Tensor value;
  Tensor grad;  // same shape as value

  void zero_grad() { grad.fill(0.0); }
};

class Graph;

/// Handle to a node of a Graph. Cheap to copy; valid while the graph lives.
class Var {
 public:
  Var() = default;
  Var(Graph* graph, std::uint32_t id) : graph_(graph), id_(id) {}

  Graph& graph() const { return *graph_; }
  std::uint32_t id() const { return id_; }
  const Tensor& value() const;
  bool requires_grad() const;

 private:
  Graph* graph_ = nullptr;
  std::uint32_t id_ = 0;
};

enum class GradMode { kEnabled, kDisabled };

/// Reverse-mode tape. Nodes are appended in evaluation order, so a reverse
/// sweep over ids is a valid topological order for backward().
class Graph {
 public:
  /// Receives the gradient flowing into the node's output.
  using BackwardFn = std::function<void(Graph&, const Tensor& grad_out)>;

  explicit Graph(GradMode mode = GradMode::kEnabled) : mode_(mode) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  GradMode mode() const { return mode_; }

  Var constant(Tensor value);

  /// Leaf bound to `p` without copying its value. When gradients are enabled,
  /// backward() accumulates straight into p.grad.
  Var parameter(Parameter& p);

  /// Appends an op result. `backward` is dropped when no input needs a gradient.
  Var emit(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward);
  Var emit(Tensor value, std::span<const Var> inputs, BackwardFn backward);

  const Tensor& value(std::uint32_t id) const;
  bool requires_grad(std::uint32_t id) const { return nodes_[id].requires_grad; }

  /// Gradient buffer of a node, allocated as zeros on first access.
  Tensor& grad(std::uint32_t id);
  bool has_grad(std::uint32_t id) const;

  /// Seeds d(loss)/d(loss) = 1 and sweeps the tape backwards.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor owned;
    const Tensor* borrowed = nullptr;
    Tensor grad;
    Parameter* param = nullptr;
    bool requires_grad = false;
    BackwardFn backward;
  };

  GradMode mode_;
  std::deque<Node> nodes_;
};

inline const Tensor& Var::value() const { return graph_->value(id_); }
inline bool Var::requires_grad() const { return graph_->requires_grad(id_); }

}  // namespace mdrd::num

#endif  // MDRD_NUMERICS_GRAPH_HPP_
