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

#ifndef TTSHAP_SHAP_ENGINE_H_
#define TTSHAP_SHAP_ENGINE_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ttshap/dense_tensor.h"
#include "ttshap/tensor_train.h"
#include "ttshap/value_router.h"

namespace ttshap {

// n_in x n_out attribution matrix; row i is the SHAP vector of feature i.
struct ShapMatrix {
  DenseTensor values;
  std::vector<std::string> feature_names;
  std::vector<std::string> output_names;

  std::size_t features() const { return values.shape()[0]; }
  std::size_t outputs() const { return values.shape()[1]; }
  double at(std::size_t i, std::size_t j) const { return values.at({i, j}); }
};

// Level-0 matrix of the SHAP train at one site. Rows and columns flatten the
// (weight, dist, model) bond triple with the weight bond outermost.
struct SiteCore {
  DenseTensor matrix;
  std::size_t site = 0;
};

// Cores built from the full coalition-weight train (internal bond n^2), so the
// product of all cores is the n_in x n_out SHAP matrix. Meant for small n.
std::vector<SiteCore> assemble_site_cores(const TensorTrain& model, const TensorTrain& dist,
                                          std::span<const std::size_t> x,
                                          std::size_t threads = 1);

inline constexpr double kMassTolerance = 1e-9;

// Total mass of a distribution train.
double distribution_mass(const TensorTrain& dist);

// Exact SHAP matrix of a train model under a train distribution. The feature
// leg of the weight train is block diagonal, so each feature is contracted as
// its own chain of site matrices.
ShapMatrix shap_tt(const TensorTrain& model, const TensorTrain& dist,
                   std::span<const std::size_t> x,
                   ScanSchedule schedule = ScanSchedule::kTree, std::size_t threads = 1,
                   ScanStats* stats = nullptr);

// Reference evaluation of the Shapley sum over all 2^n coalitions.
inline constexpr std::size_t kOracleMaxFeatures = 20;
ShapMatrix shap_dense_oracle(const ModelEvaluator& model, const EnumerableDistribution& dist,
                             std::span<const std::size_t> x,
                             std::size_t cap = kDefaultDenseCap);

// Marginal value tensor built from routers: axes (out, x_1, s_1, ..., x_n, s_n)
// for a model with axes (N_1, ..., N_n, n_out) and a joint distribution with
// axes (N_1, ..., N_n).
inline constexpr std::size_t kGeneralDomainCap = std::size_t{1} << 16;
DenseTensor marginal_value_tensor(const DenseTensor& model, const DenseTensor& dist);

ShapMatrix shap_general_dense(const DenseTensor& model, const DenseTensor& dist,
                              std::span<const std::size_t> x);

// E_{x'~P}[M(x')] as a vector of length n_out.
std::vector<double> expected_value(const TensorTrain& model, const TensorTrain& dist);

// max_j |sum_i phi_ij - (M(x)_j - E[M]_j)|.
double efficiency_residual(const ShapMatrix& phi, const TensorTrain& model,
                           const TensorTrain& dist, std::span<const std::size_t> x);

}  // namespace ttshap

#endif  // TTSHAP_SHAP_ENGINE_H_
