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

#ifndef ADRESS_MODELS_GRID_SEARCH_HPP_
#define ADRESS_MODELS_GRID_SEARCH_HPP_

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace adress::models {

enum class Objective { kAccuracy, kRmse };

std::string_view to_string(Objective o);

// Candidate SOM sizes searched by default.
inline const std::vector<int> kDefaultCandidates{5, 10, 15, 20, 25};

struct GridSearchResult {
  Objective objective = Objective::kAccuracy;
  std::vector<int> candidates;
  std::vector<double> scores;
  int chosen = 0;
};

// Best score wins (highest accuracy, lowest RMSE); exact ties go to the
// smallest C regardless of candidate order.
GridSearchResult select_candidate(const std::vector<int>& candidates,
                                  const std::vector<double>& scores, Objective objective);

// Scores every candidate with `evaluate` (in parallel; each call must be
// independent) and selects the winner. A throwing candidate aborts the search
// with an error naming that C.
GridSearchResult grid_search(const std::vector<int>& candidates, Objective objective,
                             const std::function<double(int)>& evaluate);

// Fold index in [0, k) per item. Items of each stratum are shuffled with the
// seed and dealt round-robin, so every fold sees each stratum in proportion.
std::vector<int> stratified_folds(const std::vector<int>& strata, int k, std::uint64_t seed);

}  // namespace adress::models

#endif  // ADRESS_MODELS_GRID_SEARCH_HPP_
