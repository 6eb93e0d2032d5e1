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

#include "adress/models/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adress/common/error.hpp"

namespace adress::models {

namespace {

constexpr double kTau = 1e-12;

double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
  return std::exp(-gamma * d);
}

// SMO over the 2N variables beta = (alpha, alpha*), labels s = (+1.., -1..),
// minimising 1/2 beta'Q beta + p'beta with Q_tu = s_t s_u K and
// p = (eps - y, eps + y), subject to s'beta = 0 and 0 <= beta <= C.
class SmoSolver {
 public:
  SmoSolver(std::vector<double> kernel, std::size_t n, const std::vector<double>& y,
            double epsilon, double box)
      : k_(std::move(kernel)), n_(n), box_(box), beta_(2 * n, 0.0), p_(2 * n), g_(2 * n) {
    for (std::size_t i = 0; i < n; ++i) {
      p_[i] = epsilon - y[i];
      p_[i + n] = epsilon + y[i];
    }
    g_ = p_;
  }

  void solve(double tolerance, long max_iterations) {
    for (iterations_ = 0; iterations_ < max_iterations; ++iterations_) {
      std::size_t i = 0, j = 0;
      if (!select(tolerance, i, j)) {
        converged_ = true;
        return;
      }
      update(i, j);
    }
    std::size_t i = 0, j = 0;
    converged_ = !select(tolerance, i, j);
  }

  double bias() const {
    // b = -rho, rho from free variables or the midpoint of the feasible range.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t free = 0;
    for (std::size_t t = 0; t < beta_.size(); ++t) {
      const double yg = sign(t) * g_[t];
      if (beta_[t] >= box_) {
        if (sign(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (beta_[t] <= 0.0) {
        if (sign(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++free;
        sum_free += yg;
      }
    }
    const double rho = free > 0 ? sum_free / static_cast<double>(free) : 0.5 * (ub + lb);
    return -rho;
  }

  // Maximisation-form dual value.
  double dual_objective() const {
    double v = 0.0;
    for (std::size_t t = 0; t < beta_.size(); ++t) v += beta_[t] * (g_[t] + p_[t]);
    return -0.5 * v;
  }

  double coefficient(std::size_t i) const { return beta_[i] - beta_[i + n_]; }
  bool converged() const { return converged_; }
  long iterations() const { return iterations_; }
  double gap() const { return gap_; }

 private:
  double sign(std::size_t t) const { return t < n_ ? 1.0 : -1.0; }
  double kern(std::size_t t, std::size_t u) const { return k_[(t % n_) * n_ + (u % n_)]; }
  double q(std::size_t t, std::size_t u) const { return sign(t) * sign(u) * kern(t, u); }

  bool select(double tolerance, std::size_t& out_i, std::size_t& out_j) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t imax = beta_.size();
    for (std::size_t t = 0; t < beta_.size(); ++t) {
      if (sign(t) > 0) {
        if (beta_[t] < box_ && -g_[t] >= gmax) {
          gmax = -g_[t];
          imax = t;
        }
      } else if (beta_[t] > 0.0 && g_[t] >= gmax) {
        gmax = g_[t];
        imax = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::size_t jmin = beta_.size();
    double best = std::numeric_limits<double>::infinity();
    if (imax < beta_.size()) {
      const std::size_t i = imax;
      for (std::size_t t = 0; t < beta_.size(); ++t) {
        double grad_diff;
        if (sign(t) > 0) {
          if (!(beta_[t] > 0.0)) continue;
          gmax2 = std::max(gmax2, g_[t]);
          grad_diff = gmax + g_[t];
        } else {
          if (!(beta_[t] < box_)) continue;
          gmax2 = std::max(gmax2, -g_[t]);
          grad_diff = gmax - g_[t];
        }
        if (grad_diff > 0.0) {
          double quad = kern(i, i) + kern(t, t) - 2.0 * kern(i, t);
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best) {
            best = obj;
            jmin = t;
          }
        }
      }
    }
    gap_ = gmax + gmax2;
    if (imax == beta_.size() || jmin == beta_.size() || gap_ < tolerance) return false;
    out_i = imax;
    out_j = jmin;
    return true;
  }

  void update(std::size_t i, std::size_t j) {
    const double old_i = beta_[i];
    const double old_j = beta_[j];
    const double c = box_;
    double& ai = beta_[i];
    double& aj = beta_[j];
    if (sign(i) != sign(j)) {
      double quad = kern(i, i) + kern(j, j) - 2.0 * kern(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-g_[i] - g_[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) { aj = 0.0; ai = diff; }
      } else {
        if (ai < 0.0) { ai = 0.0; aj = -diff; }
      }
      if (diff > 0.0) {
        if (ai > c) { ai = c; aj = c - diff; }
      } else {
        if (aj > c) { aj = c; ai = c + diff; }
      }
    } else {
      double quad = kern(i, i) + kern(j, j) - 2.0 * kern(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (g_[i] - g_[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) { ai = c; aj = sum - c; }
      } else {
        if (aj < 0.0) { aj = 0.0; ai = sum; }
      }
      if (sum > c) {
        if (aj > c) { aj = c; ai = sum - c; }
      } else {
        if (ai < 0.0) { ai = 0.0; aj = sum; }
      }
    }
    const double di = ai - old_i;
    const double dj = aj - old_j;
    for (std::size_t t = 0; t < beta_.size(); ++t) g_[t] += q(t, i) * di + q(t, j) * dj;
  }

  std::vector<double> k_;
  std::size_t n_;
  double box_;
  std::vector<double> beta_, p_, g_;
  long iterations_ = 0;
  bool converged_ = false;
  double gap_ = 0.0;
};

std::vector<double> scale_row(const SvrModel& m, std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - m.input_mean[k]) / m.input_scale[k];
  return out;
}

}  // namespace

SvrModel train_svr(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                   const SvrOptions& options) {
  const std::size_t n = x.size();
  if (n < 2) throw DataError("SVR needs at least 2 training points");
  if (y.size() != n) throw DataError("SVR inputs and targets differ in count");
  const std::size_t d = x.front().size();
  if (d == 0) throw DataError("SVR needs at least one feature");
  if (options.gamma && !(*options.gamma > 0.0)) throw UsageError("SVR gamma must be positive");
  if (!(options.box > 0.0) || !(options.epsilon >= 0.0) || !(options.tolerance > 0.0)) {
    throw UsageError("SVR needs box > 0, epsilon >= 0, tolerance > 0");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != d) throw DataError("SVR row " + std::to_string(i) + " has wrong width");
    for (double v : x[i]) {
      if (!std::isfinite(v)) throw DataError("non-finite SVR input");
    }
    if (!std::isfinite(y[i])) throw DataError("non-finite SVR target");
  }

  SvrModel m;
  m.input_mean.assign(d, 0.0);
  m.input_scale.assign(d, 0.0);
  for (const auto& row : x) {
    for (std::size_t k = 0; k < d; ++k) m.input_mean[k] += row[k];
  }
  for (double& v : m.input_mean) v /= static_cast<double>(n);
  for (const auto& row : x) {
    for (std::size_t k = 0; k < d; ++k) {
      m.input_scale[k] += (row[k] - m.input_mean[k]) * (row[k] - m.input_mean[k]);
    }
  }
  for (double& v : m.input_scale) {
    v = std::sqrt(v / static_cast<double>(n));
    if (!(v > 0.0)) v = 1.0;
  }

  std::vector<std::vector<double>> z(n);
  double sum = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = scale_row(m, x[i]);
    for (double v : z[i]) {
      sum += v;
      ss += v * v;
    }
  }
  const double count = static_cast<double>(n * d);
  const double var = ss / count - (sum / count) * (sum / count);
  m.gamma = options.gamma ? *options.gamma : 1.0 / (static_cast<double>(d) * (var > 1e-12 ? var : 1.0));
  m.epsilon = options.epsilon;
  m.box = options.box;

  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      kernel[i * n + j] = kernel[j * n + i] = rbf(z[i], z[j], m.gamma);
    }
  }

  SmoSolver solver(std::move(kernel), n, y, options.epsilon, options.box);
  solver.solve(options.tolerance, options.max_iterations);
  m.converged = solver.converged();
  m.iterations = solver.iterations();
  m.kkt_gap = solver.gap();
  m.dual_objective = solver.dual_objective();
  m.bias = solver.bias();
  for (std::size_t i = 0; i < n; ++i) {
    const double c = solver.coefficient(i);
    m.coefficient_sum += c;
    if (c != 0.0) {
      m.support_vectors.push_back(z[i]);
      m.coefficients.push_back(c);
      m.support_indices.push_back(i);
    }
  }
  return m;
}

double svr_decision(const SvrModel& model, std::span<const double> x) {
  if (x.size() != model.dimension()) {
    throw DataError("SVR query has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(model.dimension()));
  }
  const std::vector<double> z = scale_row(model, x);
  double f = model.bias;
  for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
    f += model.coefficients[s] * rbf(model.support_vectors[s], z, model.gamma);
  }
  return f;
}

double predict_svr(const SvrModel& model, std::span<const double> x) {
  return std::clamp(svr_decision(model, x), kMmseMin, kMmseMax);
}

}  // namespace adress::models
