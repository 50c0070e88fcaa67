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

#ifndef MDRD_LAYERS_LSTM_HPP_
#define MDRD_LAYERS_LSTM_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mdrd/layers/common.hpp"

namespace mdrd::layers {

/// One LSTM direction. Gate blocks are laid out along the 4H columns in the
/// order input, forget, candidate, output. Weights are stored input-major
/// ([D x 4H] and [H x 4H]) so that a row of inputs multiplies them directly.
struct LstmCellParams {
  LstmCellParams(const std::string& prefix, std::size_t input_dim, std::size_t hidden, SeededRng& rng);

  std::size_t input_dim;
  std::size_t hidden;
  Parameter wx;  // [D x 4H]
  Parameter wh;  // [H x 4H]
  Parameter b;   // [4H]; forget block starts at +1

  void collect(std::vector<Parameter*>& out);

  struct Bound {
    Var wx, wh, b;
    std::size_t hidden;
  };
  Bound bind(Graph& g);
};

/// Stack of bidirectional layers; layer l > 0 reads the 2H-wide output of
/// layer l - 1.
struct BiLstmStack {
  BiLstmStack(const std::string& prefix, std::size_t input_dim, std::size_t hidden, std::size_t num_layers,
              SeededRng& rng);

  std::size_t input_dim;
  std::size_t hidden;
  std::vector<LstmCellParams> forward;   // one per layer
  std::vector<LstmCellParams> backward;  // one per layer

  std::size_t num_layers() const { return forward.size(); }
  std::size_t output_dim() const { return 2 * hidden; }
  void collect(std::vector<Parameter*>& out);
};

/// One recurrence step on a batch: x [B x D], h, c [B x H] -> (h', c').
std::pair<Var, Var> lstm_cell_step(Var x, Var h, Var c, const LstmCellParams::Bound& cell);

/// Value-level convenience: x [D] (or [B x D]), h, c [H] (or [B x H]).
std::pair<Tensor, Tensor> lstm_cell_step(const Tensor& x, const Tensor& h, const Tensor& c,
                                         LstmCellParams& params);

/// Runs every layer of the stack in both directions. Returns one [B x 2H]
/// node per position holding [h_fwd | h_bwd]; masked positions yield zero
/// rows and reset the recurrent state.
std::vector<Var> bilstm_forward(const Sequence& seq, BiLstmStack& stack);

}  // namespace mdrd::layers

#endif  // MDRD_LAYERS_LSTM_HPP_
