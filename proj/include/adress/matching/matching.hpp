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

#ifndef ADRESS_MATCHING_MATCHING_HPP_
#define ADRESS_MATCHING_MATCHING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adress/models/logistic.hpp"

namespace adress::matching {

struct CohortMember {
  std::string id;
  double age = 0.0;
  int gender = 0;        // 0 = male, 1 = female
  bool treated = false;  // AD
};

struct PropensityModel {
  models::LogisticModel model;
  std::vector<double> scores;  // P(treated | age, gender), one per member
};

// Logistic regression of treatment on (age, gender). Throws DataError when a
// group is empty and NumericalError when the covariates separate the groups.
PropensityModel propensity_scores(const std::vector<CohortMember>& members);

struct MatchOptions {
  // Maximum |logit(score_t) - logit(score_c)|. Unset means
  // caliper_sd * sample std of the logit scores.
  std::optional<double> caliper;
  double caliper_sd = 0.2;
  std::uint64_t seed = 0;
};

struct MatchedPair {
  std::size_t treated = 0;  // indices into the member list
  std::size_t control = 0;
  double distance = 0.0;    // on the logit scale
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  double caliper = 0.0;
  std::size_t unmatched_treated = 0;

  // Matched members, treated then control of each pair, in pair order.
  std::vector<CohortMember> subset(const std::vector<CohortMember>& members) const;
};

// Greedy 1:1 nearest neighbour on the logit of the score, without
// replacement. Treated members are visited in a seeded random order; ties
// between controls go to the lowest index. A treated member whose nearest
// free control lies outside the caliper is left unmatched.
MatchResult match_pairs(const std::vector<CohortMember>& members,
                        const std::vector<double>& scores, const MatchOptions& options = {});

inline constexpr double kCovariateThreshold = 0.1;
inline constexpr double kHigherOrderThreshold = 0.15;

struct SmdEntry {
  std::string term;  // age, gender, age^2, gender^2, age*gender
  double smd = 0.0;  // may be +inf when pooled variance is zero but means differ
  double threshold = 0.0;
  bool pass = false;
};

struct BalanceReport {
  std::vector<SmdEntry> entries;
  bool all_pass = false;
};

// |mean_t - mean_c| / sqrt((var_t + var_c) / 2) with sample variances.
double standardized_mean_difference(const std::vector<double>& treated,
                                    const std::vector<double>& control);

BalanceReport balance_report(const std::vector<CohortMember>& members);

}  // namespace adress::matching

#endif  // ADRESS_MATCHING_MATCHING_HPP_
