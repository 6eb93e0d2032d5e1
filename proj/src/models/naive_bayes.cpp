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

#include "adress/models/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "adress/common/error.hpp"

namespace adress::models {

namespace {

double sample_quantile(std::vector<double> sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) throw DataError("bandwidth of an empty sample");
  double spread = 0.0;
  if (n >= 2) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = sample_quantile(sorted, 0.75) - sample_quantile(sorted, 0.25);
    spread = iqr > 0.0 ? std::min(sd, iqr / 1.349) : sd;
  }
  spread = std::max(spread, kMinBandwidth);
  return 1.06 * spread * std::pow(static_cast<double>(n), -0.2);
}

KdeNaiveBayesModel train_nb(const std::vector<std::vector<double>>& x,
                            const std::vector<Group>& y) {
  if (x.size() != y.size()) throw DataError("feature rows and labels differ in count");
  if (x.empty() || x.front().empty()) throw DataError("naive Bayes needs at least one feature");
  KdeNaiveBayesModel m;
  m.dimension = x.front().size();
  std::array<std::size_t, 2> counts{};
  for (std::size_t c = 0; c < 2; ++c) m.samples[c].assign(m.dimension, {});
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != m.dimension) {
      throw DataError("row " + std::to_string(i) + " has " + std::to_string(x[i].size()) +
                      " features, expected " + std::to_string(m.dimension));
    }
    const auto c = static_cast<std::size_t>(y[i]);
    ++counts[c];
    for (std::size_t j = 0; j < m.dimension; ++j) {
      if (!std::isfinite(x[i][j])) throw DataError("non-finite training feature");
      m.samples[c][j].push_back(x[i][j]);
    }
  }
  if (counts[0] == 0 || counts[1] == 0) {
    throw DataError("naive Bayes needs both CN and AD examples");
  }
  for (std::size_t c = 0; c < 2; ++c) {
    m.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(x.size());
    for (std::size_t j = 0; j < m.dimension; ++j) {
      m.bandwidths[c].push_back(silverman_bandwidth(m.samples[c][j]));
    }
  }
  return m;
}

double log_kde(const KdeNaiveBayesModel& model, Group g, std::size_t feature, double value) {
  const auto c = static_cast<std::size_t>(g);
  const std::vector<double>& pts = model.samples[c][feature];
  const double h = model.bandwidths[c][feature];
  // log( (1/n) sum_i phi((v - x_i)/h) / h ) by log-sum-exp.
  double max_e = -std::numeric_limits<double>::infinity();
  for (double p : pts) {
    const double z = (value - p) / h;
    max_e = std::max(max_e, -0.5 * z * z);
  }
  double sum = 0.0;
  for (double p : pts) {
    const double z = (value - p) / h;
    sum += std::exp(-0.5 * z * z - max_e);
  }
  return max_e + std::log(sum) - std::log(static_cast<double>(pts.size())) - std::log(h) -
         0.5 * std::log(2.0 * std::numbers::pi);
}

NbPrediction predict_nb(const KdeNaiveBayesModel& model, std::span<const double> x) {
  if (x.size() != model.dimension) {
    throw DataError("query has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(model.dimension));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("non-finite query feature");
  }
  std::array<double, 2> score{};
  for (std::size_t c = 0; c < 2; ++c) {
    score[c] = std::log(model.priors[c]);
    for (std::size_t j = 0; j < model.dimension; ++j) {
      score[c] += log_kde(model, static_cast<Group>(c), j, x[j]);
    }
  }
  NbPrediction out;
  const double top = std::max(score[0], score[1]);
  const double z0 = std::exp(score[0] - top);
  const double z1 = std::exp(score[1] - top);
  out.posterior = {z0 / (z0 + z1), z1 / (z0 + z1)};
  out.label = score[1] > score[0] ? Group::kAD : Group::kCN;
  return out;
}

}  // namespace adress::models
