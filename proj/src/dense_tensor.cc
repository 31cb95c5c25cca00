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

#include "ttshap/dense_tensor.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ttshap/errors.h"

namespace ttshap {
namespace {

std::string pair_name(const AxisPair& p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

std::string shape_name(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

void require_matrix(const DenseTensor& m, const char* what) {
  if (m.order() != 2) {
    throw ShapeError(std::string(what) + " expects a matrix, got shape " +
                     shape_name(m.shape()));
  }
}

}  // namespace

std::size_t shape_product(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

DenseTensor::DenseTensor() : values_(1, 0.0) {}

DenseTensor::DenseTensor(Shape shape)
    : shape_(std::move(shape)), values_(shape_product(shape_), 0.0) {
  for (std::size_t d : shape_) {
    if (d == 0) throw ShapeError("dimension 0 in shape " + shape_name(shape_));
  }
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  for (std::size_t d : shape_) {
    if (d == 0) throw ShapeError("dimension 0 in shape " + shape_name(shape_));
  }
  if (values_.size() != shape_product(shape_)) {
    throw ShapeError("shape " + shape_name(shape_) + " needs " +
                     std::to_string(shape_product(shape_)) + " values, got " +
                     std::to_string(values_.size()));
  }
}

DenseTensor DenseTensor::scalar(double value) { return DenseTensor({}, {value}); }

DenseTensor DenseTensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return DenseTensor({n}, std::move(values));
}

DenseTensor DenseTensor::matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ShapeError("matrix with no rows");
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw ShapeError("ragged matrix rows");
    values.insert(values.end(), row.begin(), row.end());
  }
  return DenseTensor({rows.size(), cols}, std::move(values));
}

std::size_t DenseTensor::dim(std::size_t axis) const {
  if (axis < 1 || axis > shape_.size()) {
    throw IndexError("axis " + std::to_string(axis) + " out of range for order " +
                     std::to_string(shape_.size()));
  }
  return shape_[axis - 1];
}

std::vector<std::size_t> DenseTensor::strides() const {
  std::vector<std::size_t> s(shape_.size(), 1);
  for (std::size_t k = shape_.size(); k-- > 1;) s[k - 1] = s[k] * shape_[k];
  return s;
}

std::size_t DenseTensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size()) {
    throw IndexError("expected " + std::to_string(shape_.size()) +
                     " indices, got " + std::to_string(index.size()));
  }
  std::size_t off = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= shape_[k]) {
      throw IndexError("index " + std::to_string(index[k]) + " out of range on axis " +
                       std::to_string(k + 1) + " of size " + std::to_string(shape_[k]));
    }
    off = off * shape_[k] + index[k];
  }
  return off;
}

double& DenseTensor::at(std::span<const std::size_t> index) {
  return values_[offset(index)];
}

double DenseTensor::at(std::span<const std::size_t> index) const {
  return values_[offset(index)];
}

DenseTensor permute(const DenseTensor& a, std::span<const std::size_t> perm) {
  const std::size_t order = a.order();
  if (perm.size() != order) throw ShapeError("permutation length mismatch");
  std::vector<bool> seen(order, false);
  Shape out_shape(order);
  for (std::size_t k = 0; k < order; ++k) {
    if (perm[k] < 1 || perm[k] > order || seen[perm[k] - 1]) {
      throw IndexError("invalid permutation entry " + std::to_string(perm[k]));
    }
    seen[perm[k] - 1] = true;
    out_shape[k] = a.shape()[perm[k] - 1];
  }
  bool is_identity = true;
  for (std::size_t k = 0; k < order; ++k) is_identity &= perm[k] == k + 1;
  if (is_identity) return a;

  const auto in_strides = a.strides();
  std::vector<std::size_t> src_stride(order);
  for (std::size_t k = 0; k < order; ++k) src_stride[k] = in_strides[perm[k] - 1];

  std::vector<double> out(a.size());
  std::vector<std::size_t> idx(order, 0);
  std::size_t src = 0;
  const auto in = a.values();
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    out[flat] = in[src];
    for (std::size_t k = order; k-- > 0;) {
      if (++idx[k] < out_shape[k]) {
        src += src_stride[k];
        break;
      }
      src -= src_stride[k] * (out_shape[k] - 1);
      idx[k] = 0;
    }
  }
  return DenseTensor(std::move(out_shape), std::move(out));
}

DenseTensor matmul(const DenseTensor& a, const DenseTensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  const std::size_t rows = a.shape()[0];
  const std::size_t inner = a.shape()[1];
  const std::size_t cols = b.shape()[1];
  if (b.shape()[0] != inner) {
    throw ShapeError("matmul inner dimensions " + std::to_string(inner) + " vs " +
                     std::to_string(b.shape()[0]));
  }
  std::vector<double> out(rows * cols, 0.0);
  const auto av = a.values();
  const auto bv = b.values();
  // Zero entries are skipped; compiled cores are mostly structural zeros.
  for (std::size_t i = 0; i < rows; ++i) {
    double* out_row = out.data() + i * cols;
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = av[i * inner + k];
      if (aik == 0.0) continue;
      const double* b_row = bv.data() + k * cols;
      for (std::size_t j = 0; j < cols; ++j) out_row[j] += aik * b_row[j];
    }
  }
  return DenseTensor({rows, cols}, std::move(out));
}

DenseTensor identity_matrix(std::size_t n) {
  DenseTensor id({n, n});
  for (std::size_t i = 0; i < n; ++i) id.mutable_values()[i * n + i] = 1.0;
  return id;
}

DenseTensor kron(const DenseTensor& a, const DenseTensor& b) {
  require_matrix(a, "kron");
  require_matrix(b, "kron");
  const std::size_t ar = a.shape()[0], ac = a.shape()[1];
  const std::size_t br = b.shape()[0], bc = b.shape()[1];
  DenseTensor out({ar * br, ac * bc});
  auto ov = out.mutable_values();
  const auto av = a.values();
  const auto bv = b.values();
  const std::size_t out_cols = ac * bc;
  for (std::size_t i1 = 0; i1 < ar; ++i1) {
    for (std::size_t j1 = 0; j1 < ac; ++j1) {
      const double x = av[i1 * ac + j1];
      if (x == 0.0) continue;
      for (std::size_t i2 = 0; i2 < br; ++i2) {
        const std::size_t row = i1 * br + i2;
        for (std::size_t j2 = 0; j2 < bc; ++j2) {
          ov[row * out_cols + j1 * bc + j2] = x * bv[i2 * bc + j2];
        }
      }
    }
  }
  return out;
}

namespace {

void check_pairs(const DenseTensor& a, const DenseTensor& b, std::span<const AxisPair> pairs,
                 std::vector<bool>& used_a, std::vector<bool>& used_b) {
  used_a.assign(a.order(), false);
  used_b.assign(b.order(), false);
  for (const auto& p : pairs) {
    if (p.first < 1 || p.first > a.order()) {
      throw IndexError("pair " + pair_name(p) + ": axis " + std::to_string(p.first) +
                       " out of range for left operand of order " +
                       std::to_string(a.order()));
    }
    if (p.second < 1 || p.second > b.order()) {
      throw IndexError("pair " + pair_name(p) + ": axis " + std::to_string(p.second) +
                       " out of range for right operand of order " +
                       std::to_string(b.order()));
    }
    if (used_a[p.first - 1] || used_b[p.second - 1]) {
      throw IndexError("pair " + pair_name(p) + " reuses an axis");
    }
    used_a[p.first - 1] = used_b[p.second - 1] = true;
    if (a.shape()[p.first - 1] != b.shape()[p.second - 1]) {
      throw ShapeError("pair " + pair_name(p) + ": dimension " +
                       std::to_string(a.shape()[p.first - 1]) + " vs " +
                       std::to_string(b.shape()[p.second - 1]));
    }
  }

}

}  // namespace

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const AxisPair> pairs) {
  std::vector<bool> used_a, used_b;
  check_pairs(a, b, pairs, used_a, used_b);

  // a -> (free_a, contracted), b -> (contracted, free_b), then one matmul.
  std::vector<std::size_t> perm_a, perm_b;
  Shape out_shape;
  std::size_t free_a = 1, free_b = 1, inner = 1;
  for (std::size_t k = 1; k <= a.order(); ++k) {
    if (!used_a[k - 1]) {
      perm_a.push_back(k);
      out_shape.push_back(a.shape()[k - 1]);
      free_a *= a.shape()[k - 1];
    }
  }
  for (const auto& p : pairs) {
    perm_a.push_back(p.first);
    perm_b.push_back(p.second);
    inner *= a.shape()[p.first - 1];
  }
  for (std::size_t k = 1; k <= b.order(); ++k) {
    if (!used_b[k - 1]) {
      perm_b.push_back(k);
      out_shape.push_back(b.shape()[k - 1]);
      free_b *= b.shape()[k - 1];
    }
  }
  const DenseTensor pa = permute(a, perm_a);
  const DenseTensor pb = permute(b, perm_b);
  const DenseTensor am({free_a, inner}, {pa.values().begin(), pa.values().end()});
  const DenseTensor bm({inner, free_b}, {pb.values().begin(), pb.values().end()});
  DenseTensor product = matmul(am, bm);
  return DenseTensor(std::move(out_shape),
                     {product.values().begin(), product.values().end()});
}

DenseTensor contract_naive(const DenseTensor& a, const DenseTensor& b,
                           std::span<const AxisPair> pairs) {
  std::vector<bool> used_a, used_b;
  check_pairs(a, b, pairs, used_a, used_b);
  Shape out_shape, inner_shape;
  for (std::size_t k = 0; k < a.order(); ++k) {
    if (!used_a[k]) out_shape.push_back(a.shape()[k]);
  }
  for (std::size_t k = 0; k < b.order(); ++k) {
    if (!used_b[k]) out_shape.push_back(b.shape()[k]);
  }
  for (const auto& p : pairs) inner_shape.push_back(a.shape()[p.first - 1]);
  DenseTensor out(out_shape);
  std::vector<std::size_t> oi(out_shape.size(), 0), ii(inner_shape.size(), 0);
  std::vector<std::size_t> ia(a.order()), ib(b.order());
  auto advance = [](std::vector<std::size_t>& idx, const Shape& shape) {
    for (std::size_t k = idx.size(); k-- > 0;) {
      if (++idx[k] < shape[k]) return true;
      idx[k] = 0;
    }
    return false;
  };
  for (double& slot : out.mutable_values()) {
    std::size_t k = 0;
    for (std::size_t q = 0; q < a.order(); ++q) {
      if (!used_a[q]) ia[q] = oi[k++];
    }
    for (std::size_t q = 0; q < b.order(); ++q) {
      if (!used_b[q]) ib[q] = oi[k++];
    }
    double sum = 0.0;
    std::fill(ii.begin(), ii.end(), 0);
    do {
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        ia[pairs[p].first - 1] = ii[p];
        ib[pairs[p].second - 1] = ii[p];
      }
      sum += a.at(ia) * b.at(ib);
    } while (advance(ii, inner_shape));
    slot = sum;
    advance(oi, out_shape);
  }
  return out;
}

DenseTensor outer(const DenseTensor& a, const DenseTensor& b) {
  Shape shape = a.shape();
  shape.insert(shape.end(), b.shape().begin(), b.shape().end());
  std::vector<double> values;
  values.reserve(a.size() * b.size());
  for (double x : a.values()) {
    for (double y : b.values()) values.push_back(x * y);
  }
  return DenseTensor(std::move(shape), std::move(values));
}

DenseTensor reshape(const DenseTensor& a, std::span<const std::size_t> groups) {
  std::size_t total = 0;
  for (std::size_t g : groups) {
    if (g == 0) throw ShapeError("reshape group of size 0");
    total += g;
  }
  if (total != a.order()) {
    throw ShapeError("reshape groups sum to " + std::to_string(total) +
                     " but tensor has order " + std::to_string(a.order()));
  }
  Shape shape;
  std::size_t axis = 0;
  for (std::size_t g : groups) {
    std::size_t d = 1;
    for (std::size_t k = 0; k < g; ++k) d *= a.shape()[axis++];
    shape.push_back(d);
  }
  return DenseTensor(std::move(shape), {a.values().begin(), a.values().end()});
}

DenseTensor one_hot(std::size_t i, std::size_t n) {
  if (n == 0 || i < 1 || i > n) {
    throw IndexError("one_hot position " + std::to_string(i) + " outside [1," +
                     std::to_string(n) + "]");
  }
  DenseTensor e({n});
  e.mutable_values()[i - 1] = 1.0;
  return e;
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("comparing " + shape_name(a.shape()) + " with " +
                     shape_name(b.shape()));
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  }
  return m;
}

double max_abs(const DenseTensor& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace ttshap
