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

#ifndef MDRD_LAYERS_CONV_HPP_
#define MDRD_LAYERS_CONV_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "mdrd/layers/common.hpp"

namespace mdrd::layers {

/// TextCNN filter bank. The filter of width w is stored as [w * Din x F]:
/// row k * Din + d holds the weight of window offset k, input channel d.
struct ConvBank {
  ConvBank(const std::string& prefix, std::size_t input_dim, std::vector<std::size_t> widths,
           std::size_t filters, SeededRng& rng);

  std::size_t input_dim;
  std::vector<std::size_t> widths;
  std::size_t filters;
  std::vector<Parameter> weights;  // one per width
  std::vector<Parameter> biases;   // one per width, [F]

  std::size_t output_dim() const { return filters * widths.size(); }
  std::size_t max_width() const;
  void collect(std::vector<Parameter*>& out);
};

/// relu(window * W + b) for every window, max over valid windows, features
/// concatenated width-major then filter. Sequences shorter than the widest
/// kernel are zero-padded on the right up to that width; a window is valid
/// for a row when it ends within max(row length, widest kernel).
Var conv_max_pool(const std::vector<Var>& steps, const Tensor& mask, ConvBank& bank);

}  // namespace mdrd::layers

#endif  // MDRD_LAYERS_CONV_HPP_
