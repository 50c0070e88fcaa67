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

#include "mdrd/numerics/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "mdrd/error.hpp"

namespace mdrd::num {

std::string to_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

std::size_t element_count(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

namespace {

void validate_shape(const Shape& shape) {
  if (shape.empty() || shape.size() > 2) {
    fail<DimensionError>("tensor rank must be 1 or 2, got shape ", to_string(shape));
  }
  for (auto d : shape) {
    if (d == 0) fail<DimensionError>("tensor dimensions must be positive, got ", to_string(shape));
  }
}

}  // namespace

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  validate_shape(shape_);
  data_.assign(element_count(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  validate_shape(shape_);
  if (data_.size() != element_count(shape_)) {
    fail<DimensionError>("tensor of shape ", to_string(shape_), " needs ", element_count(shape_),
                         " values, got ", data_.size());
  }
  for (double v : data_) {
    if (!std::isfinite(v)) fail("tensor constructor rejects non-finite value ", v);
  }
}

Tensor Tensor::unchecked(Shape shape, std::vector<double> data) {
  validate_shape(shape);
  if (data.size() != element_count(shape)) {
    fail<DimensionError>("tensor of shape ", to_string(shape), " needs ", element_count(shape),
                         " values, got ", data.size());
  }
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = std::move(data);
  return t;
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) fail<DimensionError>("ragged matrix literal");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor({r, c}, std::move(data));
}

Tensor Tensor::vector(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

std::size_t Tensor::rows() const { return shape_.size() == 2 ? shape_[0] : (shape_.empty() ? 0 : 1); }

std::size_t Tensor::cols() const { return shape_.empty() ? 0 : shape_.back(); }

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) {
    fail<DimensionError>("max_abs_diff: shapes ", to_string(a.shape()), " and ", to_string(b.shape()));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace mdrd::num
