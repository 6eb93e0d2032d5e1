// Copyright 2026 The adress-baseline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADRESS_MODELS_SVR_HPP_
#define ADRESS_MODELS_SVR_HPP_

#include <optional>
#include <span>
#include <vector>

namespace adress::models {

inline constexpr double kMmseMin = 0.0;
inline constexpr double kMmseMax = 30.0;

struct SvrOptions {
  // RBF width. Unset means 1 / (d * var) of the internally scaled inputs.
  std::optional<double> gamma;
  double epsilon = 0.5;
  double box = 1.0;
  double tolerance = 1e-3;
  long max_iterations = 1'000'000;
};

struct SvrModel {
  // Per-feature scaling applied to every input before the kernel.
  std::vector<double> input_mean;
  std::vector<double> input_scale;
  // Scaled support vectors and their coefficients alpha - alpha*.
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> coefficients;
  // Training-row index of each support vector.
  std::vector<std::size_t> support_indices;
  double bias = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
  double box = 0.0;

  bool converged = false;
  long iterations = 0;
  // Final max KKT violation (m - M in the working-set sense).
  double kkt_gap = 0.0;
  // Dual objective in maximisation form:
  //   -1/2 sum_ij b_i b_j K_ij + sum_i y_i b_i - eps sum_i (a_i + a*_i),  b = a - a*.
  double dual_objective = 0.0;
  // Sum of alpha - alpha* over all training points (zero at feasibility).
  double coefficient_sum = 0.0;

  std::size_t dimension() const { return input_mean.size(); }
};

// epsilon-SVR with an RBF kernel, trained by SMO on the 2N-variable dual
// (second-order working-set selection). Inputs are standardized internally.
SvrModel train_svr(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                   const SvrOptions& options = {});

// Unclamped decision value.
double svr_decision(const SvrModel& model, std::span<const double> x);

// Decision value clamped to the MMSE range [0, 30].
double predict_svr(const SvrModel& model, std::span<const double> x);

}  // namespace adress::models

#endif  // ADRESS_MODELS_SVR_HPP_
