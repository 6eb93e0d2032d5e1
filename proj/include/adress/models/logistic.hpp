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

#ifndef ADRESS_MODELS_LOGISTIC_HPP_
#define ADRESS_MODELS_LOGISTIC_HPP_

#include <span>
#include <vector>

namespace adress::models {

struct LogisticOptions {
  double tolerance = 1e-8;
  int max_iterations = 100;
};

struct LogisticModel {
  double intercept = 0.0;
  std::vector<double> weights;
  bool converged = false;
  // Perfect or quasi-perfect separation: the likelihood has no finite
  // maximiser and the weights were diverging when fitting stopped.
  bool separated = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;

  double linear_predictor(std::span<const double> x) const;
  double probability(std::span<const double> x) const;
};

// Maximum likelihood by iteratively reweighted least squares.
LogisticModel fit_logistic(const std::vector<std::vector<double>>& x,
                           const std::vector<int>& t, const LogisticOptions& options = {});

// Bernoulli log-likelihood of (intercept, weights) on the data.
double logistic_log_likelihood(double intercept, std::span<const double> weights,
                               const std::vector<std::vector<double>>& x,
                               const std::vector<int>& t);

}  // namespace adress::models

#endif  // ADRESS_MODELS_LOGISTIC_HPP_
