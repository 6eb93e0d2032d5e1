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

#include "adress/models/logistic.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "adress/common/error.hpp"

namespace adress::models {

namespace {

double sigmoid(double eta) {
  return eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

// log(1 + exp(eta)) without overflow.
double softplus(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

}  // namespace

double LogisticModel::linear_predictor(std::span<const double> x) const {
  if (x.size() != weights.size()) throw DataError("logistic query has wrong width");
  double eta = intercept;
  for (std::size_t k = 0; k < x.size(); ++k) eta += weights[k] * x[k];
  return eta;
}

double LogisticModel::probability(std::span<const double> x) const {
  return sigmoid(linear_predictor(x));
}

double logistic_log_likelihood(double intercept, std::span<const double> weights,
                               const std::vector<std::vector<double>>& x,
                               const std::vector<int>& t) {
  double ll = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double eta = intercept;
    for (std::size_t k = 0; k < weights.size(); ++k) eta += weights[k] * x[i][k];
    ll += t[i] * eta - softplus(eta);
  }
  return ll;
}

LogisticModel fit_logistic(const std::vector<std::vector<double>>& x, const std::vector<int>& t,
                           const LogisticOptions& options) {
  const std::size_t n = x.size();
  if (t.size() != n) throw DataError("covariate rows and treatment labels differ in count");
  const std::size_t d = n > 0 ? x.front().size() : 0;
  if (n < d + 1 || n == 0) {
    throw DataError("logistic regression needs at least " + std::to_string(d + 1) + " rows");
  }
  Eigen::MatrixXd a(n, d + 1);
  Eigen::VectorXd target(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != d) throw DataError("covariate row " + std::to_string(i) + " has wrong width");
    if (t[i] != 0 && t[i] != 1) throw DataError("treatment labels must be 0 or 1");
    a(i, 0) = 1.0;
    for (std::size_t k = 0; k < d; ++k) a(i, k + 1) = x[i][k];
    target[i] = t[i];
  }
  if (!a.allFinite()) throw DataError("non-finite covariate");

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  LogisticModel m;
  for (m.iterations = 1; m.iterations <= options.max_iterations; ++m.iterations) {
    const Eigen::VectorXd eta = a * w;
    Eigen::VectorXd p(n), v(n);
    double max_misfit = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = sigmoid(eta[i]);
      v[i] = p[i] * (1.0 - p[i]);
      max_misfit = std::max(max_misfit, std::abs(target[i] - p[i]));
    }
    // Every point fitted with near certainty: the data are separable and
    // the weights would keep growing.
    if (max_misfit < 1e-9) {
      m.separated = true;
      break;
    }
    const Eigen::MatrixXd h = a.transpose() * v.asDiagonal() * a;
    const Eigen::VectorXd step =
        h.completeOrthogonalDecomposition().solve(a.transpose() * (target - p));
    w += step;
    if (!w.allFinite()) {
      throw NumericalError("logistic regression diverged to non-finite weights");
    }
    if (step.cwiseAbs().maxCoeff() < options.tolerance) {
      m.converged = true;
      break;
    }
  }
  m.iterations = std::min(m.iterations, options.max_iterations);
  // Weights still large and growing after the cap also indicate separation.
  if (!m.converged && w.cwiseAbs().maxCoeff() > 1e3) m.separated = true;

  m.intercept = w[0];
  m.weights.assign(w.data() + 1, w.data() + w.size());
  m.log_likelihood = logistic_log_likelihood(m.intercept, m.weights, x, t);
  Eigen::VectorXd p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = sigmoid((a.row(i) * w)(0));
  m.gradient_norm = (a.transpose() * (target - p)).norm();
  return m;
}

}  // namespace adress::models
