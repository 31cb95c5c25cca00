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

#include "ttshap/coalition_weights.h"

#include <cmath>
#include <string>
#include <vector>

#include "ttshap/errors.h"

namespace ttshap {
namespace {

// Above this feature count the (n-1)! seed is spread over the sites.
constexpr std::size_t kLogSpaceThreshold = 20;

struct Transition {
  bool valid = false;
  std::size_t next_k = 0;
  double value = 0.0;
};

// Reading switch `s` at 1-based site j while in state (feature i, k kept
// features other than i seen so far).
Transition step(std::size_t n, std::size_t i, std::size_t j, std::size_t s,
                std::size_t k) {
  const double jd = static_cast<double>(j);
  if (s == kDropped) {
    return {true, k, (j == i ? -1.0 : 1.0) / jd};
  }
  if (j == i) return {true, k, 1.0 / jd};
  // k + 1 kept features other than i can never exceed n - 1.
  if (k + 2 > n) return {};
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  return {true, k + 1, (kd + 1.0) / (jd * (nd - kd - 1.0))};
}

struct Scaling {
  double seed = 1.0;
  double per_site = 1.0;
};

Scaling scaling_for(std::size_t n) {
  Scaling s;
  if (n <= kLogSpaceThreshold) {
    for (std::size_t m = 2; m < n; ++m) s.seed *= static_cast<double>(m);
  } else {
    s.per_site = std::exp(std::lgamma(static_cast<double>(n)) / static_cast<double>(n));
  }
  return s;
}

void require_feature(std::size_t n, std::size_t i) {
  if (n == 0) throw ValidationError("feature count must be positive");
  if (i < 1 || i > n) {
    throw IndexError("feature " + std::to_string(i) + " outside [1," + std::to_string(n) +
                     "]");
  }
}

}  // namespace

double shapley_weight(std::size_t coalition_size, std::size_t n) {
  if (coalition_size >= n) {
    throw ValidationError("coalition of size " + std::to_string(coalition_size) +
                          " cannot exclude a feature out of " + std::to_string(n));
  }
  // 1 / (n * C(n-1, s)).
  double binom = 1.0;
  const std::size_t s = std::min(coalition_size, n - 1 - coalition_size);
  for (std::size_t m = 1; m <= s; ++m) {
    binom = binom * static_cast<double>(n - 1 - s + m) / static_cast<double>(m);
  }
  return 1.0 / (static_cast<double>(n) * binom);
}

double signed_coefficient(std::span<const std::size_t> switches, std::size_t i,
                          std::size_t n) {
  require_feature(n, i);
  if (switches.size() != n) {
    throw ValidationError("switch vector has length " + std::to_string(switches.size()) +
                          ", expected " + std::to_string(n));
  }
  std::size_t kept_others = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (switches[j] != kDropped && switches[j] != kKept) {
      throw ValidationError("switch " + std::to_string(j + 1) + " is " +
                            std::to_string(switches[j]) + ", expected 1 or 2");
    }
    if (j + 1 != i && switches[j] == kKept) ++kept_others;
  }
  const double w = shapley_weight(kept_others, n);
  return switches[i - 1] == kKept ? w : -w;
}

DenseTensor weight_tensor_dense(std::size_t n) {
  if (n == 0) throw ValidationError("feature count must be positive");
  if (n > kMaxDenseWeightFeatures) {
    throw ResourceError("dense weight tensor limited to " +
                        std::to_string(kMaxDenseWeightFeatures) + " features, got " +
                        std::to_string(n));
  }
  Shape shape{n};
  shape.insert(shape.end(), n, 2);
  DenseTensor out(shape);
  const std::size_t patterns = std::size_t{1} << n;
  std::vector<std::size_t> switches(n);
  auto values = out.mutable_values();
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t p = 0; p < patterns; ++p) {
      // Row-major: the first switch is the most significant bit.
      for (std::size_t j = 0; j < n; ++j) switches[j] = ((p >> (n - 1 - j)) & 1) + 1;
      values[(i - 1) * patterns + p] = signed_coefficient(switches, i, n);
    }
  }
  return out;
}

TensorTrain weight_cores_for_feature(std::size_t n, std::size_t i) {
  require_feature(n, i);
  const Scaling scale = scaling_for(n);
  std::vector<DenseTensor> cores;
  cores.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t left = j == 1 ? 1 : n;
    const std::size_t right = j == n ? 1 : n;
    DenseTensor core({left, 2, right});
    auto v = core.mutable_values();
    for (std::size_t k = 0; k < left; ++k) {
      for (std::size_t s = kDropped; s <= kKept; ++s) {
        const Transition tr = step(n, i, j, s, k);
        if (!tr.valid) continue;
        double value = tr.value * scale.per_site;
        if (j == 1) value *= scale.seed;
        // The last site sums every terminal state against a ones vector.
        const std::size_t col = j == n ? 0 : tr.next_k;
        v[(k * 2 + (s - 1)) * right + col] += value;
      }
    }
    cores.push_back(std::move(core));
  }
  return TensorTrain(std::move(cores));
}

WeightCoreSet weight_cores(std::size_t n) {
  if (n == 0) throw ValidationError("feature count must be positive");
  std::vector<TensorTrain> rows;
  rows.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) rows.push_back(weight_cores_for_feature(n, i));

  const std::size_t states = n * n;
  std::vector<DenseTensor> cores;
  cores.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t left = j == 0 ? n : states;
    const std::size_t right = j + 1 == n ? 1 : states;
    DenseTensor core({left, 2, right});
    auto v = core.mutable_values();
    for (std::size_t i = 0; i < n; ++i) {
      const DenseTensor& block = rows[i].core(j);
      const std::size_t bl = block.shape()[0], br = block.shape()[2];
      for (std::size_t a = 0; a < bl; ++a) {
        const std::size_t row = j == 0 ? i : weight_state_index(n, i, a);
        for (std::size_t s = 0; s < 2; ++s) {
          for (std::size_t b = 0; b < br; ++b) {
            const std::size_t col = j + 1 == n ? 0 : weight_state_index(n, i, b);
            v[(row * 2 + s) * right + col] = block.values()[(a * 2 + s) * br + b];
          }
        }
      }
    }
    cores.push_back(std::move(core));
  }
  return {n, TensorTrain(std::move(cores))};
}

}  // namespace ttshap
