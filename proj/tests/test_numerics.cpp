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


#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mdrd/error.hpp"
#include "mdrd/numerics/grad_check.hpp"
#include "mdrd/numerics/graph.hpp"
#include "mdrd/numerics/ops.hpp"
#include "mdrd/numerics/rng.hpp"
#include "mdrd/numerics/tensor.hpp"
#include "testing.hpp"

namespace mdrd::num {
namespace {

using testing::project;
using testing::random_tensor;

Tensor eval_affine(const Tensor& x, const Tensor& w, const Tensor& b) {
  Graph g(GradMode::kDisabled);
  return affine(g.constant(x), g.constant(w), g.constant(b)).value();
}

TEST(Affine, IdentityWeights) {
  const Tensor out = eval_affine(Tensor::matrix({{1, 2}}), Tensor::matrix({{1, 0}, {0, 1}}), Tensor::vector({0, 0}));
  EXPECT_EQ(out, Tensor::matrix({{1, 2}}));
}

TEST(Affine, ZeroWeightsGiveBias) {
  const Tensor out = eval_affine(Tensor::matrix({{1, 2}}), Tensor::zeros(2, 2), Tensor::vector({3, 4}));
  EXPECT_EQ(out, Tensor::matrix({{3, 4}}));
}

TEST(Affine, OneStep) {
  const Tensor out = eval_affine(Tensor::matrix({{1, 2}}), Tensor::matrix({{1, 0}, {0, 1}}), Tensor::vector({1, 1}));
  EXPECT_EQ(out, Tensor::matrix({{2, 3}}));
}

TEST(Affine, RejectsMismatchedShapes) {
  EXPECT_THROW(eval_affine(Tensor::matrix({{1, 2, 3}}), Tensor::zeros(2, 2), Tensor::vector({0, 0})), DimensionError);
  EXPECT_THROW(eval_affine(Tensor::matrix({{1, 2}}), Tensor::zeros(2, 2), Tensor::vector({0, 0, 0})), DimensionError);
}

TEST(Affine, IsLinear) {
  SeededRng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor x = random_tensor({3, 4}, rng), y = random_tensor({3, 4}, rng), w = random_tensor({4, 5}, rng);
    const double alpha = rng.uniform(-3, 3), beta = rng.uniform(-3, 3);
    Tensor mix({3, 4});
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = alpha * x[i] + beta * y[i];
    const Tensor zero({5});
    const Tensor lhs = eval_affine(mix, w, zero);
    const Tensor ax = eval_affine(x, w, zero), ay = eval_affine(y, w, zero);
    for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_NEAR(lhs[i], alpha * ax[i] + beta * ay[i], 1e-10);
  }
}

// Softmax against an extended-precision evaluation.
std::vector<long double> softmax_oracle(const std::vector<double>& z) {
  std::vector<long double> e;
  long double sum = 0;
  for (double v : z) sum += std::exp(static_cast<long double>(v));
  for (double v : z) e.push_back(std::exp(static_cast<long double>(v)) / sum);
  return e;
}

TEST(Softmax, Examples) {
  const auto half = softmax(std::vector<double>{0, 0});
  EXPECT_EQ(half[0], 0.5);
  EXPECT_EQ(half[1], 0.5);
  for (double c : {-700.0, 0.0, 3.5, 800.0}) {
    for (double p : softmax(std::vector<double>{c, c, c})) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
  }
  const auto p = softmax(std::vector<double>{1, 2, 3});
  const auto oracle = softmax_oracle({1, 2, 3});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], static_cast<double>(oracle[i]), 1e-15);
  EXPECT_NEAR(p[0], 0.09003, 1e-5);
  EXPECT_NEAR(p[1], 0.24473, 1e-5);
  EXPECT_NEAR(p[2], 0.66524, 1e-5);
}

TEST(Softmax, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(softmax(std::vector<double>{}), Error);
  EXPECT_THROW(softmax(std::vector<double>{1.0, NAN}), Error);
  EXPECT_THROW(softmax(std::vector<double>{1.0, INFINITY}), Error);
}

TEST(Softmax, ShiftInvariant) {
  SeededRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> z(1 + rng.below(20));
    for (double& v : z) v = rng.uniform(-30, 30);
    const double c = rng.uniform(-500, 500);
    std::vector<double> shifted = z;
    for (double& v : shifted) v += c;
    const auto a = softmax(z), b = softmax(shifted);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  }
}

TEST(Softmax, SumsToOneUpToTenThousandEntries) {
  SeededRng rng(12);
  for (std::size_t n : {1u, 2u, 17u, 1000u, 10000u}) {
    for (double scale : {1.0, 50.0, 700.0}) {
      std::vector<double> z(n);
      for (double& v : z) v = rng.uniform(-scale, scale);
      const auto p = softmax(z);
      long double sum = 0;
      for (double v : p) {
        EXPECT_GE(v, 0.0);
        sum += v;
      }
      EXPECT_NEAR(static_cast<double>(sum), 1.0, 1e-12) << "n=" << n << " scale=" << scale;
    }
  }
}

TEST(Activation, FixedPoints) {
  EXPECT_EQ(activate(0.0, Activation::kSigmoid), 0.5);
  EXPECT_EQ(activate(0.0, Activation::kTanh), 0.0);
  EXPECT_EQ(activate(-2.0, Activation::kRelu), 0.0);
  EXPECT_EQ(activate(2.5, Activation::kRelu), 2.5);
}

TEST(Activation, SigmoidOfOne) {
  const long double oracle = 1.0L / (1.0L + std::exp(-1.0L));
  EXPECT_NEAR(activate(1.0, Activation::kSigmoid), static_cast<double>(oracle), 1e-15);
  EXPECT_NEAR(activate(1.0, Activation::kSigmoid), 0.7310586, 1e-7);
}

TEST(Activation, SigmoidIsStableAtExtremes) {
  EXPECT_EQ(activate(-800.0, Activation::kSigmoid), 0.0);
  EXPECT_EQ(activate(800.0, Activation::kSigmoid), 1.0);
  EXPECT_TRUE(std::isfinite(activate(-745.0, Activation::kSigmoid)));
}

TEST(Activation, ParseNames) {
  EXPECT_EQ(parse_activation("tanh"), Activation::kTanh);
  EXPECT_EQ(activation_name(Activation::kRelu), "relu");
  EXPECT_THROW(parse_activation("gelu"), Error);
}

TEST(GradCheck, QuadraticIsExact) {
  Parameter x("x", Tensor::matrix({{3.0}}));
  std::vector<Parameter*> params{&x};
  const auto r = grad_check(
      [&](Graph& g) {
        const Var v = g.parameter(x);
        return mul(v, v);
      },
      params);
  EXPECT_LT(r.max_rel_error, 1e-9);
  EXPECT_EQ(r.checked, 1u);
}

// sin is not a library op; it is registered here through the public emit
// hook so the checker can be exercised on a non-polynomial function.
Var sin_op(Var x) {
  Tensor out = x.value();
  for (double& v : out.data()) v = std::sin(v);
  const auto id = x.id();
  return x.graph().emit(std::move(out), {x}, [id](Graph& g, const Tensor& gout) {
    Tensor& gx = g.grad(id);
    const Tensor& xv = g.value(id);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += gout[i] * std::cos(xv[i]);
  });
}

TEST(GradCheck, SineAtZero) {
  Parameter x("x", Tensor::matrix({{0.0}}));
  std::vector<Parameter*> params{&x};
  const auto r = grad_check([&](Graph& g) { return sin_op(g.parameter(x)); }, params);
  EXPECT_NEAR(r.worst_analytic, 1.0, 1e-10);
  EXPECT_NEAR(r.worst_numeric, 1.0, 1e-10);
}

TEST(GradCheck, DetectsWrongBackward) {
  Parameter x("x", Tensor::matrix({{0.7}}));
  std::vector<Parameter*> params{&x};
  const auto r = grad_check(
      [&](Graph& g) {
        const Var v = g.parameter(x);
        Tensor out = v.value();
        const auto id = v.id();
        return g.emit(std::move(out), {v}, [id](Graph& gg, const Tensor& gout) { gg.grad(id)[0] += 2.0 * gout[0]; });
      },
      params);
  EXPECT_NEAR(r.max_rel_error, 0.5, 1e-8);
  EXPECT_EQ(r.worst_parameter, "x");
}

TEST(GradCheck, RejectsNonDeterministicLoss) {
  Parameter x("x", Tensor::matrix({{1.0}}));
  std::vector<Parameter*> params{&x};
  int calls = 0;
  EXPECT_THROW(grad_check(
                   [&](Graph& g) {
                     ++calls;
                     return add(g.parameter(x), g.constant(Tensor::matrix({{static_cast<double>(calls)}})));
                   },
                   params),
               Error);
}

// Every graph op on randomized small shapes.
class OpGradients : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(OpGradients, MatchCentralDifferences) {
  SeededRng rng(GetParam());
  const std::size_t b = 2 + rng.below(3), din = 1 + rng.below(4), dout = 1 + rng.below(4);
  Parameter x("x", random_tensor({b, din}, rng));
  Parameter y("y", random_tensor({b, din}, rng));
  Parameter w("w", random_tensor({din, dout}, rng));
  Parameter bias("bias", random_tensor({dout}, rng));
  Parameter table("table", random_tensor({4, din}, rng));
  std::vector<Parameter*> params{&x, &y, &w, &bias, &table};
  Tensor mask({b, din}, 1.0);
  for (std::size_t r = 0; r < b; ++r) {
    for (std::size_t c = 1; c < din; ++c) mask.at(r, c) = rng.uniform() < 0.5 ? 0.0 : 1.0;
  }
  std::vector<std::size_t> ids;
  for (std::size_t r = 0; r < b; ++r) ids.push_back(rng.below(4));
  ids.back() = ids.front();  // repeated id accumulates

  const std::vector<std::pair<std::string, std::function<Var(Graph&)>>> cases = {
      {"affine", [&](Graph& g) { return affine(g.parameter(x), g.parameter(w), g.parameter(bias)); }},
      {"matmul", [&](Graph& g) { return matmul(g.parameter(x), g.parameter(w)); }},
      {"add", [&](Graph& g) { return add(g.parameter(x), g.parameter(y)); }},
      {"add_n",
       [&](Graph& g) {
         const Var px = g.parameter(x), py = g.parameter(y);
         const std::vector<Var> terms{px, py, px};
         return add_n(terms);
       }},
      {"mul", [&](Graph& g) { return mul(g.parameter(x), g.parameter(y)); }},
      {"scale_rows", [&](Graph& g) { return scale_rows(g.parameter(x), g.parameter(y), din - 1); }},
      {"sigmoid", [&](Graph& g) { return activate(g.parameter(x), Activation::kSigmoid); }},
      {"tanh", [&](Graph& g) { return activate(g.parameter(x), Activation::kTanh); }},
      {"relu", [&](Graph& g) { return activate(g.parameter(x), Activation::kRelu); }},
      {"softmax_rows", [&](Graph& g) { return softmax_rows(g.parameter(x)); }},
      {"masked_softmax_rows", [&](Graph& g) { return masked_softmax_rows(g.parameter(x), mask); }},
      {"slice_cols", [&](Graph& g) { return slice_cols(g.parameter(x), din > 1 ? 1 : 0, din > 1 ? din - 1 : 1); }},
      {"concat_cols",
       [&](Graph& g) {
         const std::vector<Var> parts{g.parameter(x), g.parameter(y), g.parameter(x)};
         return concat_cols(parts);
       }},
      {"gather_rows", [&](Graph& g) { return gather_rows(g.parameter(table), ids); }},
      {"masked_max",
       [&](Graph& g) {
         const std::vector<Var> cands{g.parameter(x), g.parameter(y), activate(g.parameter(x), Activation::kTanh)};
         Tensor valid({b, 3}, 1.0);
         valid.at(0, 1) = 0.0;
         return masked_max(cands, valid);
       }},
  };
  for (const auto& [name, build] : cases) {
    const auto r = grad_check([&](Graph& g) { return project(build(g)); }, params);
    EXPECT_LT(r.max_rel_error, 1e-4) << name << " worst at " << r.worst_parameter << "[" << r.worst_index << "]";
  }
}

INSTANTIATE_TEST_SUITE_P(RandomShapes, OpGradients, ::testing::Range<std::uint64_t>(1, 11));

TEST(MaskedSoftmax, MaskedEntriesAreExactlyZero) {
  Graph g(GradMode::kDisabled);
  const Tensor mask = Tensor::matrix({{1, 0, 1}, {0, 1, 0}});
  const Tensor p = masked_softmax_rows(g.constant(Tensor::matrix({{1, 50, 2}, {3, -4, 9}})), mask).value();
  EXPECT_EQ(p.at(0, 1), 0.0);
  EXPECT_EQ(p.at(1, 0), 0.0);
  EXPECT_EQ(p.at(1, 1), 1.0);
  EXPECT_NEAR(p.at(0, 0) + p.at(0, 2), 1.0, 1e-15);
  EXPECT_THROW(masked_softmax_rows(g.constant(Tensor::zeros(1, 2)), Tensor::zeros(1, 2)), Error);
}

TEST(GatherRows, OutOfRangeIdFails) {
  Graph g;
  const std::vector<std::size_t> ids{3};
  EXPECT_THROW(gather_rows(g.constant(Tensor::zeros(2, 2)), ids), Error);
}

TEST(Graph, BackwardNeedsScalar) {
  Graph g;
  Parameter x("x", Tensor::zeros(2, 2));
  EXPECT_THROW(g.backward(g.parameter(x)), DimensionError);
  Graph off(GradMode::kDisabled);
  Parameter s("s", Tensor::matrix({{1.0}}));
  EXPECT_THROW(off.backward(off.parameter(s)), Error);
}

TEST(Graph, ParameterGradientsAccumulateAcrossGraphs) {
  Parameter x("x", Tensor::matrix({{2.0}}));
  for (int i = 0; i < 2; ++i) {
    Graph g;
    const Var v = g.parameter(x);
    g.backward(mul(v, v));
  }
  EXPECT_EQ(x.grad[0], 8.0);
  x.zero_grad();
  EXPECT_EQ(x.grad[0], 0.0);
}

TEST(Tensor, ShapeAndDataMustAgree) {
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), DimensionError);
  EXPECT_EQ(element_count({3, 4}), 12u);
  EXPECT_EQ(to_string({3, 4}), "[3x4]");
}

TEST(Rng, DerivedStreamsAreReproducibleAndDistinct) {
  const SeededRng root(42);
  SeededRng a = root.derive(1), b = root.derive(1), c = root.derive(2);
  const auto va = a.next_u64();
  EXPECT_EQ(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
  EXPECT_EQ(derive_seed(42, 1), derive_seed(42, 1));
  EXPECT_NE(derive_seed(42, 1), derive_seed(43, 1));
}

TEST(Rng, UniformAndBelowStayInRange) {
  SeededRng rng(3);
  double sum = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    ASSERT_LT(rng.below(7), 7u);
  }
  EXPECT_NEAR(sum / 20000, 0.5, 0.01);
}

}  // namespace
}  // namespace mdrd::num
