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

#include "mdrd/layers/lstm.hpp"

#include "mdrd/error.hpp"
#include "mdrd/numerics/ops.hpp"

namespace mdrd::layers {

using num::Activation;

namespace {

Tensor lstm_bias(std::size_t hidden) {
  Tensor b({4 * hidden});
  for (std::size_t j = hidden; j < 2 * hidden; ++j) b[j] = 1.0;
  return b;
}

}  // namespace

LstmCellParams::LstmCellParams(const std::string& prefix, std::size_t input_dim_in, std::size_t hidden_in,
                               SeededRng& rng)
    : input_dim(input_dim_in),
      hidden(hidden_in),
      wx(prefix + ".wx", xavier_uniform({input_dim_in, 4 * hidden_in}, input_dim_in, 4 * hidden_in, rng)),
      wh(prefix + ".wh", xavier_uniform({hidden_in, 4 * hidden_in}, hidden_in, 4 * hidden_in, rng)),
      b(prefix + ".b", lstm_bias(hidden_in)) {}

void LstmCellParams::collect(std::vector<Parameter*>& out) {
  out.push_back(&wx);
  out.push_back(&wh);
  out.push_back(&b);
}

LstmCellParams::Bound LstmCellParams::bind(Graph& g) {
  return {g.parameter(wx), g.parameter(wh), g.parameter(b), hidden};
}

BiLstmStack::BiLstmStack(const std::string& prefix, std::size_t input_dim_in, std::size_t hidden_in,
                         std::size_t num_layers, SeededRng& rng)
    : input_dim(input_dim_in), hidden(hidden_in) {
  if (num_layers == 0 || hidden_in == 0 || input_dim_in == 0) fail("BiLSTM needs positive layers and widths");
  forward.reserve(num_layers);
  backward.reserve(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    const std::size_t in = l == 0 ? input_dim_in : 2 * hidden_in;
    const std::string layer = prefix + ".l" + std::to_string(l);
    forward.emplace_back(layer + ".fwd", in, hidden_in, rng);
    backward.emplace_back(layer + ".bwd", in, hidden_in, rng);
  }
}

void BiLstmStack::collect(std::vector<Parameter*>& out) {
  for (std::size_t l = 0; l < forward.size(); ++l) {
    forward[l].collect(out);
    backward[l].collect(out);
  }
}

std::pair<Var, Var> lstm_cell_step(Var x, Var h, Var c, const LstmCellParams::Bound& cell) {
  const std::size_t hid = cell.hidden;
  if (h.value().cols() != hid || c.value().cols() != hid) {
    fail<DimensionError>("lstm_cell_step: state ", num::to_string(h.value().shape()), "/",
                         num::to_string(c.value().shape()), " does not match hidden size ", hid);
  }
  const Var gates = num::add(num::affine(x, cell.wx, cell.b), num::matmul(h, cell.wh));
  const Var i = num::activate(num::slice_cols(gates, 0, hid), Activation::kSigmoid);
  const Var f = num::activate(num::slice_cols(gates, hid, hid), Activation::kSigmoid);
  const Var g = num::activate(num::slice_cols(gates, 2 * hid, hid), Activation::kTanh);
  const Var o = num::activate(num::slice_cols(gates, 3 * hid, hid), Activation::kSigmoid);
  const Var c_next = num::add(num::mul(f, c), num::mul(i, g));
  const Var h_next = num::mul(o, num::activate(c_next, Activation::kTanh));
  return {h_next, c_next};
}

std::pair<Tensor, Tensor> lstm_cell_step(const Tensor& x, const Tensor& h, const Tensor& c,
                                         LstmCellParams& params) {
  auto as_matrix = [](const Tensor& t) {
    return t.rank() == 2 ? t : Tensor::unchecked({1, t.size()}, std::vector<double>(t.data().begin(), t.data().end()));
  };
  Graph g(num::GradMode::kDisabled);
  const auto cell = params.bind(g);
  auto [hn, cn] = lstm_cell_step(g.constant(as_matrix(x)), g.constant(as_matrix(h)), g.constant(as_matrix(c)), cell);
  return {hn.value(), cn.value()};
}

namespace {

bool column_all_ones(const Tensor& mask, std::size_t t) {
  for (std::size_t r = 0; r < mask.rows(); ++r) {
    if (mask.at(r, t) != 1.0) return false;
  }
  return true;
}

// Runs one direction over `inputs`; returns outputs indexed by position.
std::vector<Var> run_direction(Graph& g, const std::vector<Var>& inputs, const Tensor& mask, Var mask_var,
                               const LstmCellParams::Bound& cell, bool reverse) {
  const std::size_t n = inputs.size();
  const std::size_t batch = mask.rows();
  std::vector<Var> out(n);
  Var h = g.constant(Tensor({batch, cell.hidden}));
  Var c = h;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t t = reverse ? n - 1 - k : k;
    auto [hn, cn] = lstm_cell_step(inputs[t], h, c, cell);
    if (!column_all_ones(mask, t)) {
      hn = num::scale_rows(hn, mask_var, t);
      cn = num::scale_rows(cn, mask_var, t);
    }
    h = hn;
    c = cn;
    out[t] = h;
  }
  return out;
}

}  // namespace

std::vector<Var> bilstm_forward(const Sequence& seq, BiLstmStack& stack) {
  if (seq.steps.empty()) fail("bilstm_forward: empty sequence");
  require_nonempty_rows(seq.mask, "bilstm_forward");
  Graph& g = seq.steps.front().graph();
  if (seq.steps.front().value().cols() != stack.input_dim) {
    fail<DimensionError>("bilstm_forward: token width ", seq.steps.front().value().cols(), " but stack expects ",
                         stack.input_dim);
  }
  const Var mask_var = g.constant(seq.mask);
  std::vector<Var> current = seq.steps;
  for (std::size_t l = 0; l < stack.num_layers(); ++l) {
    const auto fwd_cell = stack.forward[l].bind(g);
    const auto bwd_cell = stack.backward[l].bind(g);
    const auto fwd = run_direction(g, current, seq.mask, mask_var, fwd_cell, false);
    const auto bwd = run_direction(g, current, seq.mask, mask_var, bwd_cell, true);
    std::vector<Var> next(current.size());
    for (std::size_t t = 0; t < current.size(); ++t) {
      const Var parts[] = {fwd[t], bwd[t]};
      next[t] = num::concat_cols(parts);
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace mdrd::layers
