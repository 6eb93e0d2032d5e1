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

#ifndef ADRESS_FEATURES_FUNCTIONALS_HPP_
#define ADRESS_FEATURES_FUNCTIONALS_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "adress/features/feature_table.hpp"
#include "adress/features/lld.hpp"

namespace adress::features {

struct FrameFeatureVector {
  std::array<double, kFeatureCount> values{};
  std::size_t frame_index = 0;
  // Diagnostic only; not part of the feature vector.
  double voiced_fraction = 0.0;
};

// Statistics used by apply_functionals. Empty input yields 0 everywhere,
// which is the imputation rule for voiced-only functionals of unvoiced frames.
namespace stats {

double mean(std::span<const double> x);
// Population standard deviation.
double stddev(std::span<const double> x);
// stddev / |mean|; 0 when the mean is 0.
double coefficient_of_variation(std::span<const double> x);
// Linear interpolation between order statistics at position p * (n - 1).
double percentile(std::span<const double> x, double p);

struct SlopeStats {
  double mean_rising = 0.0;
  double stddev_rising = 0.0;
  double mean_falling = 0.0;
  double stddev_falling = 0.0;
};

// Slopes (units per second) between consecutive turning points of the
// trajectory; the endpoints count as turning points. Falling slopes are
// reported as magnitudes.
SlopeStats slopes(std::span<const double> values, std::span<const double> times);

}  // namespace stats

// Reduces one frame's descriptor trajectories to the 88 functionals listed in
// kFeatureNames.
FrameFeatureVector apply_functionals(const LldSeries& llds);

}  // namespace adress::features

#endif  // ADRESS_FEATURES_FUNCTIONALS_HPP_
