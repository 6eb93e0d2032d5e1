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

#include "adress/models/grid_search.hpp"

#include <cmath>
#include <exception>
#include <future>
#include <map>
#include <string>

#include "adress/common/error.hpp"
#include "adress/common/random.hpp"

namespace adress::models {

std::string_view to_string(Objective o) {
  return o == Objective::kAccuracy ? "accuracy" : "rmse";
}

GridSearchResult select_candidate(const std::vector<int>& candidates,
                                  const std::vector<double>& scores, Objective objective) {
  if (candidates.empty()) throw UsageError("grid search needs at least one candidate");
  if (scores.size() != candidates.size()) throw UsageError("one score per candidate required");
  GridSearchResult r;
  r.objective = objective;
  r.candidates = candidates;
  r.scores = scores;
  std::size_t best = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (std::isnan(scores[i])) {
      throw NumericalError("grid search score for C=" + std::to_string(candidates[i]) + " is NaN");
    }
    if (best == candidates.size()) {
      best = i;
      continue;
    }
    const bool better = objective == Objective::kAccuracy ? scores[i] > scores[best]
                                                          : scores[i] < scores[best];
    const bool tie_smaller = scores[i] == scores[best] && candidates[i] < candidates[best];
    if (better || tie_smaller) best = i;
  }
  r.chosen = candidates[best];
  return r;
}

GridSearchResult grid_search(const std::vector<int>& candidates, Objective objective,
                             const std::function<double(int)>& evaluate) {
  std::vector<std::future<double>> jobs;
  jobs.reserve(candidates.size());
  for (int c : candidates) jobs.push_back(std::async(std::launch::async, evaluate, c));
  std::vector<double> scores;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      scores.push_back(jobs[i].get());
    } catch (const Error& e) {
      // Drain the rest before reporting.
      for (std::size_t j = i + 1; j < jobs.size(); ++j) {
        try { jobs[j].get(); } catch (...) {}
      }
      throw_error(e.category(),
                  "grid search candidate C=" + std::to_string(candidates[i]) + ": " + e.what());
    } catch (const std::exception& e) {
      for (std::size_t j = i + 1; j < jobs.size(); ++j) {
        try { jobs[j].get(); } catch (...) {}
      }
      throw NumericalError("grid search candidate C=" + std::to_string(candidates[i]) + ": " +
                           e.what());
    }
  }
  return select_candidate(candidates, scores, objective);
}

std::vector<int> stratified_folds(const std::vector<int>& strata, int k, std::uint64_t seed) {
  if (k < 2) throw UsageError("cross-validation needs at least 2 folds");
  if (strata.size() < static_cast<std::size_t>(k)) {
    throw DataError("cannot split " + std::to_string(strata.size()) + " items into " +
                    std::to_string(k) + " folds");
  }
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < strata.size(); ++i) groups[strata[i]].push_back(i);
  Rng rng(seed);
  std::vector<int> fold(strata.size(), 0);
  // Continue the round-robin across strata so fold sizes differ by at most one.
  std::size_t next = 0;
  for (auto& [stratum, items] : groups) {
    rng.shuffle(items);
    for (std::size_t i : items) fold[i] = static_cast<int>(next++ % static_cast<std::size_t>(k));
  }
  return fold;
}

}  // namespace adress::models
