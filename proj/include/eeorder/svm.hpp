// Copyright 2026 The eeorder Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "eeorder/features.hpp"

namespace eeorder {

struct LinearSvmParams {
  double lambda = 1e-4;
  std::size_t epochs = 30;
  std::uint64_t seed = 1;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;

  double decision(const SparseVec& x) const { return x.dot(weights) + bias; }
  Label predict(const SparseVec& x) const {
    return decision(x) >= 0.0 ? Label::kAttested : Label::kUnattested;
  }

  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);
};

// lambda/2 (|w|^2 + b^2) + mean hinge loss; Attested is +1.
double svm_objective(const LinearModel& m, const EncodedSet& data);

// Pegasos: primal subgradient steps of size 1/(lambda t) over a freshly
// shuffled order each epoch, with the bias as a regularised constant
// feature. Returns the average of the iterates over the second half of
// training.
LinearModel train_linear_svm(const EncodedSet& data, const LinearSvmParams& params);

struct RbfSvmParams {
  double c = 1.0;
  double gamma = 0.0;  // 0 -> 1 / number of features
  double tol = 1e-3;
  std::size_t max_iter = 0;  // 0 -> max(10^7, 100 N)
  std::size_t cache_mb = 256;
};

struct KernelModel {
  std::vector<SparseVec> support;
  std::vector<double> support_sq_norm;
  std::vector<double> coef;  // alpha_i y_i
  double rho = 0.0;
  double gamma = 0.0;
  double c = 1.0;
  bool converged = false;
  std::size_t iterations = 0;
  // Final alphas and labels of every training example (for checks).
  std::vector<double> alpha;
  std::vector<int> y;

  double decision(const SparseVec& x) const;
  Label predict(const SparseVec& x) const {
    return decision(x) >= 0.0 ? Label::kAttested : Label::kUnattested;
  }

  nlohmann::json to_json() const;
  static KernelModel from_json(const nlohmann::json& j);
};

double rbf_kernel(const SparseVec& u, double u_sq, const SparseVec& v,
                  double v_sq, double gamma);

// SMO with second-order working-set selection on the dual
//   min 1/2 a'Qa - e'a,  0 <= a <= C,  y'a = 0,  Q_ij = y_i y_j K(x_i, x_j)
// with K(u, v) = exp(-gamma |u - v|^2), until the maximal KKT violation
// drops below tol. Hitting the iteration cap is reported through
// `converged`, not thrown.
KernelModel train_rbf_svm(const EncodedSet& data, const RbfSvmParams& params);

}  // namespace eeorder
