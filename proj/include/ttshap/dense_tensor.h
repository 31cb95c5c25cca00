/*
 * Copyright 2026 The ttshap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TTSHAP_DENSE_TENSOR_H_
#define TTSHAP_DENSE_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace ttshap {

using Shape = std::vector<std::size_t>;

// Real tensor of arbitrary order stored as a flat row-major array. An order-0
// tensor (empty shape) holds exactly one scalar.
//
// Axis numbers passed to the tensor operations below are 1-based, element
// indices passed to at() are 0-based.
class DenseTensor {
 public:
  // The scalar 0.
  DenseTensor();
  // Zero-filled tensor of the given shape.
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<double> values);

  static DenseTensor scalar(double value);
  static DenseTensor vector(std::vector<double> values);
  // Row-major construction of a matrix from nested rows.
  static DenseTensor matrix(const std::vector<std::vector<double>>& rows);

  const Shape& shape() const { return shape_; }
  std::size_t order() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }
  // Dimension of a 1-based axis.
  std::size_t dim(std::size_t axis) const;

  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  double& at(std::span<const std::size_t> index);
  double at(std::span<const std::size_t> index) const;
  double& at(std::initializer_list<std::size_t> index) {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  double at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  // Row-major strides, in elements.
  std::vector<std::size_t> strides() const;

  bool operator==(const DenseTensor& other) const = default;

 private:
  std::size_t offset(std::span<const std::size_t> index) const;

  Shape shape_;
  std::vector<double> values_;
};

using AxisPair = std::pair<std::size_t, std::size_t>;

// Multi-leg contraction: each pair (i, j) sums axis i of `a` against axis j of
// `b` (1-based). Surviving axes of `a` come first, then those of `b`, each in
// their original order.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const AxisPair> pairs);
inline DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                            std::initializer_list<AxisPair> pairs) {
  return contract(a, b, std::span<const AxisPair>(pairs.begin(), pairs.size()));
}

// Same result as contract() by explicit summation over every index; slow.
DenseTensor contract_naive(const DenseTensor& a, const DenseTensor& b,
                           std::span<const AxisPair> pairs);

DenseTensor outer(const DenseTensor& a, const DenseTensor& b);

// Merges consecutive axis groups; groups must sum to the order of `a`.
DenseTensor reshape(const DenseTensor& a, std::span<const std::size_t> groups);
inline DenseTensor reshape(const DenseTensor& a,
                           std::initializer_list<std::size_t> groups) {
  return reshape(a, std::span<const std::size_t>(groups.begin(), groups.size()));
}

// Reorders axes: result axis k is input axis perm[k] (1-based).
DenseTensor permute(const DenseTensor& a, std::span<const std::size_t> perm);

// Vector of length n with a one at the 1-based position i.
DenseTensor one_hot(std::size_t i, std::size_t n);

// Order-2 helpers used by the train and scan code.
DenseTensor matmul(const DenseTensor& a, const DenseTensor& b);
DenseTensor identity_matrix(std::size_t n);
// Kronecker product of two matrices; row (i1, i2) maps to i1 * rows(b) + i2.
DenseTensor kron(const DenseTensor& a, const DenseTensor& b);

std::size_t shape_product(std::span<const std::size_t> shape);

// max |a - b| over all entries; shapes must agree.
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);
double max_abs(const DenseTensor& a);

}  // namespace ttshap

#endif  // TTSHAP_DENSE_TENSOR_H_
