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

#ifndef MDRD_NUMERICS_TENSOR_HPP_
#define MDRD_NUMERICS_TENSOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mdrd::num {

using Shape = std::vector<std::size_t>;

std::string to_string(const Shape& shape);
std::size_t element_count(const Shape& shape);

/// Dense row-major tensor of doubles. The shape is fixed at construction;
/// only the element values can change afterwards.
///
/// Rank-1 tensors of length n are treated as a single row [1 x n] by the
/// matrix accessors, which is how bias vectors enter the graph ops.
class Tensor {
 public:
  Tensor() = default;

  /// All elements set to `fill`.
  explicit Tensor(Shape shape, double fill = 0.0);

  /// Takes ownership of `data`; rejects size mismatches and non-finite values.
  Tensor(Shape shape, std::vector<double> data);

  /// Like the checked constructor but admits NaN/Inf.
  static Tensor unchecked(Shape shape, std::vector<double> data);

  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor vector(std::initializer_list<double> values);
  static Tensor vector(std::vector<double> values);
  static Tensor zeros(std::size_t rows, std::size_t cols) { return Tensor({rows, cols}); }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  /// Matrix view: rank-1 tensors are one row.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols(), cols()};
  }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  void fill(double value);

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  /// Element-wise bitwise equality including the shape.
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// Largest absolute element-wise difference; shapes must match.
double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace mdrd::num

#endif  // MDRD_NUMERICS_TENSOR_HPP_
