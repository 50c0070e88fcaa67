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

#ifndef MDRD_NUMERICS_OPS_HPP_
#define MDRD_NUMERICS_OPS_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mdrd/numerics/graph.hpp"
#include "mdrd/numerics/tensor.hpp"

namespace mdrd::num {

enum class Activation { kSigmoid, kTanh, kRelu };

/// "sigmoid", "tanh" or "relu"; anything else throws.
Activation parse_activation(std::string_view name);
std::string_view activation_name(Activation kind);

double activate(double x, Activation kind);
Tensor activate(const Tensor& z, Activation kind);

/// Max-shifted softmax of a non-empty finite vector.
std::vector<double> softmax(std::span<const double> z);

/// Row-wise softmax of a matrix (a rank-1 tensor is one row).
Tensor softmax(const Tensor& z);

// Graph ops. Matrices are [rows x cols]; every op registers an exact
// analytic backward rule.

/// x [B x Din] * W [Din x Dout] + b [Dout].
Var affine(Var x, Var w, Var b);

/// x [B x Din] * W [Din x Dout].
Var matmul(Var x, Var w);

Var add(Var a, Var b);

/// Sum of equally shaped terms, accumulated left to right.
Var add_n(std::span<const Var> terms);

/// Element-wise product.
Var mul(Var a, Var b);

/// out[r][:] = weights[r][column] * x[r][:]
Var scale_rows(Var x, Var weights, std::size_t column);

Var activate(Var z, Activation kind);

Var softmax_rows(Var z);

/// Softmax over the entries whose mask is 1; masked entries get exactly 0.
/// Every row needs at least one unmasked entry.
Var masked_softmax_rows(Var z, const Tensor& mask);

Var slice_cols(Var x, std::size_t start, std::size_t count);

Var concat_cols(std::span<const Var> parts);

/// out[r] = table[ids[r]]; gradient reaches only the selected rows.
Var gather_rows(Var table, std::span<const std::size_t> ids);

/// Element-wise max across candidates [B x F], restricted per row to the
/// candidates with valid[r][k] = 1. Each row needs one valid candidate.
Var masked_max(std::span<const Var> candidates, const Tensor& valid);

}  // namespace mdrd::num

#endif  // MDRD_NUMERICS_OPS_HPP_
