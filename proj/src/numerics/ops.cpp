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

#include "mdrd/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "mdrd/error.hpp"

namespace mdrd::num {

Activation parse_activation(std::string_view name) {
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  fail<ConfigError>("unknown activation '", name, "' (expected sigmoid, tanh or relu)");
}

std::string_view activation_name(Activation kind) {
  switch (kind) {
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
  }
  fail("invalid activation kind");
}

double activate(double x, Activation kind) {
  switch (kind) {
    case Activation::kSigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::kTanh: return std::tanh(x);
    case Activation::kRelu: return x > 0.0 ? x : 0.0;
  }
  fail("invalid activation kind");
}

Tensor activate(const Tensor& z, Activation kind) {
  Tensor out(z.shape());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i])) fail("activate: non-finite input ", z[i]);
    out[i] = activate(z[i], kind);
  }
  return out;
}

namespace {

void softmax_into(std::span<const double> z, std::span<double> out) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : z) {
    if (std::isnan(v)) fail("softmax: NaN input");
    if (std::isinf(v)) fail("softmax: infinite input");
    top = std::max(top, v);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - top);
    total += out[i];
  }
  for (double& v : out) v /= total;
}

void require_matrix(const Tensor& t, const char* op, const char* what) {
  if (t.rank() != 2) fail<DimensionError>(op, ": ", what, " must be a matrix, got ", to_string(t.shape()));
}

void require_same(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    fail<DimensionError>(op, ": shape mismatch ", to_string(a.shape()), " vs ", to_string(b.shape()));
  }
}

// out[i][j] += sum_k x[i][k] * w[k][j]
void gemm_acc(const Tensor& x, const Tensor& w, Tensor& out) {
  const std::size_t rows = x.rows(), inner = x.cols(), cols = w.cols();
  const double* xp = x.data().data();
  const double* wp = w.data().data();
  double* op = out.data().data();
  for (std::size_t i = 0; i < rows; ++i) {
    double* orow = op + i * cols;
    for (std::size_t k = 0; k < inner; ++k) {
      const double xv = xp[i * inner + k];
      if (xv == 0.0) continue;
      const double* wrow = wp + k * cols;
      for (std::size_t j = 0; j < cols; ++j) orow[j] += xv * wrow[j];
    }
  }
}

// Backward of out = x * w given grad of out.
void gemm_backward(Graph& g, std::uint32_t xid, std::uint32_t wid, const Tensor& gout) {
  const Tensor& x = g.value(xid);
  const Tensor& w = g.value(wid);
  const std::size_t rows = x.rows(), inner = x.cols(), cols = w.cols();
  const double* gp = gout.data().data();
  if (g.requires_grad(xid)) {
    double* gx = g.grad(xid).data().data();
    const double* wp = w.data().data();
    for (std::size_t i = 0; i < rows; ++i) {
      const double* grow = gp + i * cols;
      for (std::size_t k = 0; k < inner; ++k) {
        const double* wrow = wp + k * cols;
        double acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j) acc += grow[j] * wrow[j];
        gx[i * inner + k] += acc;
      }
    }
  }
  if (g.requires_grad(wid)) {
    double* gw = g.grad(wid).data().data();
    const double* xp = x.data().data();
    for (std::size_t i = 0; i < rows; ++i) {
      const double* grow = gp + i * cols;
      for (std::size_t k = 0; k < inner; ++k) {
        const double xv = xp[i * inner + k];
        if (xv == 0.0) continue;
        double* gwrow = gw + k * cols;
        for (std::size_t j = 0; j < cols; ++j) gwrow[j] += xv * grow[j];
      }
    }
  }
}

void check_gemm_shapes(const Tensor& x, const Tensor& w, const char* op) {
  require_matrix(x, op, "x");
  require_matrix(w, op, "W");
  if (x.cols() != w.rows()) {
    fail<DimensionError>(op, ": inner dimensions disagree, x ", to_string(x.shape()), " vs W ",
                         to_string(w.shape()));
  }
}

}  // namespace

std::vector<double> softmax(std::span<const double> z) {
  if (z.empty()) fail("softmax: empty vector");
  std::vector<double> out(z.size());
  softmax_into(z, out);
  return out;
}

Tensor softmax(const Tensor& z) {
  if (z.empty()) fail("softmax: empty tensor");
  Tensor out(z.shape());
  for (std::size_t r = 0; r < z.rows(); ++r) softmax_into(z.row(r), out.row(r));
  return out;
}

Var affine(Var x, Var w, Var b) {
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  const Tensor& bv = b.value();
  check_gemm_shapes(xv, wv, "affine");
  if (bv.size() != wv.cols()) {
    fail<DimensionError>("affine: bias ", to_string(bv.shape()), " does not match W ", to_string(wv.shape()));
  }
  Tensor out({xv.rows(), wv.cols()});
  for (std::size_t i = 0; i < out.rows(); ++i) {
    std::copy(bv.data().begin(), bv.data().end(), out.row(i).begin());
  }
  gemm_acc(xv, wv, out);
  const auto xid = x.id(), wid = w.id(), bid = b.id();
  return x.graph().emit(std::move(out), {x, w, b}, [xid, wid, bid](Graph& g, const Tensor& gout) {
    gemm_backward(g, xid, wid, gout);
    if (g.requires_grad(bid)) {
      Tensor& gb = g.grad(bid);
      for (std::size_t i = 0; i < gout.rows(); ++i) {
        auto row = gout.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) gb[j] += row[j];
      }
    }
  });
}

Var matmul(Var x, Var w) {
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  check_gemm_shapes(xv, wv, "matmul");
  Tensor out({xv.rows(), wv.cols()});
  gemm_acc(xv, wv, out);
  const auto xid = x.id(), wid = w.id();
  return x.graph().emit(std::move(out), {x, w},
                        [xid, wid](Graph& g, const Tensor& gout) { gemm_backward(g, xid, wid, gout); });
}

Var add(Var a, Var b) {
  require_same(a.value(), b.value(), "add");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const auto aid = a.id(), bid = b.id();
  return a.graph().emit(std::move(out), {a, b}, [aid, bid](Graph& g, const Tensor& gout) {
    for (auto id : {aid, bid}) {
      if (!g.requires_grad(id)) continue;
      Tensor& gi = g.grad(id);
      for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += gout[i];
    }
  });
}

Var add_n(std::span<const Var> terms) {
  if (terms.empty()) fail("add_n: no terms");
  Tensor out = terms[0].value();
  for (std::size_t t = 1; t < terms.size(); ++t) {
    const Tensor& v = terms[t].value();
    require_same(out, v, "add_n");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  }
  std::vector<std::uint32_t> ids;
  ids.reserve(terms.size());
  for (const Var& t : terms) ids.push_back(t.id());
  return terms[0].graph().emit(std::move(out), terms, [ids = std::move(ids)](Graph& g, const Tensor& gout) {
    for (auto id : ids) {
      if (!g.requires_grad(id)) continue;
      Tensor& gi = g.grad(id);
      for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += gout[i];
    }
  });
}

Var mul(Var a, Var b) {
  require_same(a.value(), b.value(), "mul");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const auto aid = a.id(), bid = b.id();
  return a.graph().emit(std::move(out), {a, b}, [aid, bid](Graph& g, const Tensor& gout) {
    const Tensor& av = g.value(aid);
    const Tensor& bv = g.value(bid);
    if (g.requires_grad(aid)) {
      Tensor& ga = g.grad(aid);
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += gout[i] * bv[i];
    }
    if (g.requires_grad(bid)) {
      Tensor& gb = g.grad(bid);
      for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += gout[i] * av[i];
    }
  });
}

Var scale_rows(Var x, Var weights, std::size_t column) {
  const Tensor& xv = x.value();
  const Tensor& wv = weights.value();
  require_matrix(xv, "scale_rows", "x");
  if (wv.rows() != xv.rows() || column >= wv.cols()) {
    fail<DimensionError>("scale_rows: weights ", to_string(wv.shape()), " column ", column,
                         " incompatible with x ", to_string(xv.shape()));
  }
  Tensor out = xv;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const double s = wv.at(r, column);
    for (double& v : out.row(r)) v *= s;
  }
  const auto xid = x.id(), wid = weights.id();
  return x.graph().emit(std::move(out), {x, weights}, [xid, wid, column](Graph& g, const Tensor& gout) {
    const Tensor& xv = g.value(xid);
    const Tensor& wv = g.value(wid);
    if (g.requires_grad(xid)) {
      Tensor& gx = g.grad(xid);
      for (std::size_t r = 0; r < gx.rows(); ++r) {
        const double s = wv.at(r, column);
        auto grow = gout.row(r);
        auto gxrow = gx.row(r);
        for (std::size_t j = 0; j < gxrow.size(); ++j) gxrow[j] += s * grow[j];
      }
    }
    if (g.requires_grad(wid)) {
      Tensor& gw = g.grad(wid);
      for (std::size_t r = 0; r < xv.rows(); ++r) {
        auto grow = gout.row(r);
        auto xrow = xv.row(r);
        double acc = 0.0;
        for (std::size_t j = 0; j < xrow.size(); ++j) acc += grow[j] * xrow[j];
        gw.at(r, column) += acc;
      }
    }
  });
}

Var activate(Var z, Activation kind) {
  Tensor out = activate(z.value(), kind);
  const auto zid = z.id();
  // Output id is the node about to be emitted; its value is read back in backward.
  auto& graph = z.graph();
  const auto out_id = static_cast<std::uint32_t>(graph.size());
  return graph.emit(std::move(out), {z}, [zid, out_id, kind](Graph& g, const Tensor& gout) {
    const Tensor& y = g.value(out_id);
    const Tensor& zv = g.value(zid);
    Tensor& gz = g.grad(zid);
    switch (kind) {
      case Activation::kSigmoid:
        for (std::size_t i = 0; i < gz.size(); ++i) gz[i] += gout[i] * y[i] * (1.0 - y[i]);
        break;
      case Activation::kTanh:
        for (std::size_t i = 0; i < gz.size(); ++i) gz[i] += gout[i] * (1.0 - y[i] * y[i]);
        break;
      case Activation::kRelu:
        for (std::size_t i = 0; i < gz.size(); ++i) {
          if (zv[i] > 0.0) gz[i] += gout[i];
        }
        break;
    }
  });
}

namespace {

Graph::BackwardFn softmax_backward(std::uint32_t zid, std::uint32_t out_id) {
  return [zid, out_id](Graph& g, const Tensor& gout) {
    const Tensor& y = g.value(out_id);
    Tensor& gz = g.grad(zid);
    for (std::size_t r = 0; r < y.rows(); ++r) {
      auto yr = y.row(r);
      auto gr = gout.row(r);
      double dot = 0.0;
      for (std::size_t j = 0; j < yr.size(); ++j) dot += yr[j] * gr[j];
      auto gzr = gz.row(r);
      for (std::size_t j = 0; j < yr.size(); ++j) gzr[j] += yr[j] * (gr[j] - dot);
    }
  };
}

}  // namespace

Var softmax_rows(Var z) {
  Tensor out = softmax(z.value());
  auto& graph = z.graph();
  const auto out_id = static_cast<std::uint32_t>(graph.size());
  return graph.emit(std::move(out), {z}, softmax_backward(z.id(), out_id));
}

Var masked_softmax_rows(Var z, const Tensor& mask) {
  const Tensor& zv = z.value();
  require_same(zv, mask, "masked_softmax_rows");
  Tensor out(zv.shape());
  std::vector<double> kept;
  for (std::size_t r = 0; r < zv.rows(); ++r) {
    kept.clear();
    for (std::size_t j = 0; j < zv.cols(); ++j) {
      if (mask.at(r, j) != 0.0) kept.push_back(zv.at(r, j));
    }
    if (kept.empty()) fail("masked softmax: row ", r, " is fully masked");
    const auto probs = softmax(kept);
    std::size_t k = 0;
    for (std::size_t j = 0; j < zv.cols(); ++j) {
      out.at(r, j) = mask.at(r, j) != 0.0 ? probs[k++] : 0.0;
    }
  }
  auto& graph = z.graph();
  const auto out_id = static_cast<std::uint32_t>(graph.size());
  return graph.emit(std::move(out), {z}, softmax_backward(z.id(), out_id));
}

Var slice_cols(Var x, std::size_t start, std::size_t count) {
  const Tensor& xv = x.value();
  require_matrix(xv, "slice_cols", "x");
  if (count == 0 || start + count > xv.cols()) {
    fail<DimensionError>("slice_cols: [", start, ", ", start + count, ") outside ", to_string(xv.shape()));
  }
  Tensor out({xv.rows(), count});
  for (std::size_t r = 0; r < xv.rows(); ++r) {
    auto src = xv.row(r).subspan(start, count);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  const auto xid = x.id();
  return x.graph().emit(std::move(out), {x}, [xid, start, count](Graph& g, const Tensor& gout) {
    Tensor& gx = g.grad(xid);
    for (std::size_t r = 0; r < gout.rows(); ++r) {
      auto dst = gx.row(r).subspan(start, count);
      auto src = gout.row(r);
      for (std::size_t j = 0; j < count; ++j) dst[j] += src[j];
    }
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) fail("concat_cols: no parts");
  const std::size_t rows = parts[0].value().rows();
  std::size_t total = 0;
  std::vector<std::size_t> widths;
  std::vector<std::uint32_t> ids;
  for (const Var& p : parts) {
    const Tensor& v = p.value();
    require_matrix(v, "concat_cols", "part");
    if (v.rows() != rows) {
      fail<DimensionError>("concat_cols: row mismatch ", to_string(parts[0].value().shape()), " vs ",
                           to_string(v.shape()));
    }
    widths.push_back(v.cols());
    ids.push_back(p.id());
    total += v.cols();
  }
  Tensor out({rows, total});
  for (std::size_t r = 0; r < rows; ++r) {
    auto dst = out.row(r).begin();
    for (const Var& p : parts) {
      auto src = p.value().row(r);
      dst = std::copy(src.begin(), src.end(), dst);
    }
  }
  return parts[0].graph().emit(
      std::move(out), parts, [ids = std::move(ids), widths = std::move(widths)](Graph& g, const Tensor& gout) {
        std::size_t offset = 0;
        for (std::size_t p = 0; p < ids.size(); ++p) {
          if (g.requires_grad(ids[p])) {
            Tensor& gp = g.grad(ids[p]);
            for (std::size_t r = 0; r < gout.rows(); ++r) {
              auto src = gout.row(r).subspan(offset, widths[p]);
              auto dst = gp.row(r);
              for (std::size_t j = 0; j < widths[p]; ++j) dst[j] += src[j];
            }
          }
          offset += widths[p];
        }
      });
}

Var gather_rows(Var table, std::span<const std::size_t> ids) {
  const Tensor& tv = table.value();
  require_matrix(tv, "gather_rows", "table");
  if (ids.empty()) fail("gather_rows: no ids");
  Tensor out({ids.size(), tv.cols()});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] >= tv.rows()) fail<DimensionError>("gather_rows: id ", ids[r], " out of range for ", tv.rows(), " rows");
    auto src = tv.row(ids[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  const auto tid = table.id();
  std::vector<std::size_t> rows(ids.begin(), ids.end());
  return table.graph().emit(std::move(out), {table}, [tid, rows = std::move(rows)](Graph& g, const Tensor& gout) {
    Tensor& gt = g.grad(tid);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto src = gout.row(r);
      auto dst = gt.row(rows[r]);
      for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
    }
  });
}

Var masked_max(std::span<const Var> candidates, const Tensor& valid) {
  if (candidates.empty()) fail("masked_max: no candidates");
  const Tensor& first = candidates[0].value();
  require_matrix(first, "masked_max", "candidate");
  const std::size_t rows = first.rows(), cols = first.cols();
  if (valid.rows() != rows || valid.cols() != candidates.size()) {
    fail<DimensionError>("masked_max: validity ", to_string(valid.shape()), " does not cover ", candidates.size(),
                         " candidates of ", to_string(first.shape()));
  }
  for (const Var& c : candidates) require_same(first, c.value(), "masked_max");

  Tensor out({rows, cols});
  // winner[r * cols + j] = index of the candidate that produced out[r][j]
  std::vector<std::uint32_t> winner(rows * cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    bool any = false;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (valid.at(r, k) == 0.0) continue;
      auto src = candidates[k].value().row(r);
      for (std::size_t j = 0; j < cols; ++j) {
        if (!any || src[j] > out.at(r, j)) {
          out.at(r, j) = src[j];
          winner[r * cols + j] = static_cast<std::uint32_t>(k);
        }
      }
      any = true;
    }
    if (!any) fail("masked_max: row ", r, " has no valid candidate");
  }
  std::vector<std::uint32_t> ids;
  for (const Var& c : candidates) ids.push_back(c.id());
  return candidates[0].graph().emit(
      std::move(out), candidates,
      [ids = std::move(ids), winner = std::move(winner)](Graph& g, const Tensor& gout) {
        for (std::size_t i = 0; i < winner.size(); ++i) {
          const auto id = ids[winner[i]];
          if (g.requires_grad(id)) g.grad(id)[i] += gout[i];
        }
      });
}

}  // namespace mdrd::num
