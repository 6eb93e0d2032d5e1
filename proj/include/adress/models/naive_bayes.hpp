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

#ifndef ADRESS_MODELS_NAIVE_BAYES_HPP_
#define ADRESS_MODELS_NAIVE_BAYES_HPP_

#include <array>
#include <span>
#include <vector>

#include "adress/common/group.hpp"

namespace adress::models {

inline constexpr double kMinBandwidth = 1e-6;

// Silverman's rule of thumb: 1.06 * min(sd, IQR/1.349) * n^(-1/5), with the
// sample sd. A zero IQR falls back to sd; the spread is floored at 1e-6.
double silverman_bandwidth(std::span<const double> values);

// Naive Bayes with one Gaussian-kernel density per class and feature.
struct KdeNaiveBayesModel {
  std::size_t dimension = 0;
  std::array<double, 2> priors{};  // indexed by Group
  // samples[class][feature] holds that class's training values.
  std::array<std::vector<std::vector<double>>, 2> samples;
  std::array<std::vector<double>, 2> bandwidths;
};

struct NbPrediction {
  Group label = Group::kCN;
  std::array<double, 2> posterior{};  // indexed by Group, sums to 1
};

KdeNaiveBayesModel train_nb(const std::vector<std::vector<double>>& x,
                            const std::vector<Group>& y);

// Log of the class-conditional density of one feature value.
double log_kde(const KdeNaiveBayesModel& model, Group g, std::size_t feature, double value);

// Argmax of prior x product of per-feature densities, in log space. Ties go to CN.
NbPrediction predict_nb(const KdeNaiveBayesModel& model, std::span<const double> x);

}  // namespace adress::models

#endif  // ADRESS_MODELS_NAIVE_BAYES_HPP_
