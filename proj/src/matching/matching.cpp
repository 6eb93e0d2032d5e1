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

#include "adress/matching/matching.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "adress/common/error.hpp"
#include "adress/common/random.hpp"

namespace adress::matching {

namespace {

void count_groups(const std::vector<CohortMember>& members, std::size_t& treated,
                  std::size_t& control) {
  treated = control = 0;
  for (const auto& m : members) (m.treated ? treated : control)++;
}

double logit(double p) {
  constexpr double kEdge = 1e-12;
  p = std::min(std::max(p, kEdge), 1.0 - kEdge);
  return std::log(p / (1.0 - p));
}

}  // namespace

PropensityModel propensity_scores(const std::vector<CohortMember>& members) {
  std::size_t treated = 0, control = 0;
  count_groups(members, treated, control);
  if (treated == 0 || control == 0) {
    throw DataError("propensity scores need both treated and control members");
  }
  std::vector<std::vector<double>> x;
  std::vector<int> t;
  for (const auto& m : members) {
    if (!(m.age > 0.0)) throw DataError("member '" + m.id + "' has non-positive age");
    x.push_back({m.age, static_cast<double>(m.gender)});
    t.push_back(m.treated ? 1 : 0);
  }
  PropensityModel out;
  out.model = models::fit_logistic(x, t);
  if (out.model.separated) {
    throw NumericalError("age and gender perfectly separate the groups; propensity scores undefined");
  }
  for (const auto& row : x) out.scores.push_back(out.model.probability(row));
  return out;
}

std::vector<CohortMember> MatchResult::subset(const std::vector<CohortMember>& members) const {
  std::vector<CohortMember> out;
  for (const auto& p : pairs) {
    out.push_back(members[p.treated]);
    out.push_back(members[p.control]);
  }
  return out;
}

MatchResult match_pairs(const std::vector<CohortMember>& members,
                        const std::vector<double>& scores, const MatchOptions& options) {
  if (scores.size() != members.size()) throw DataError("one propensity score per member required");
  std::vector<std::size_t> treated, control;
  for (std::size_t i = 0; i < members.size(); ++i) {
    (members[i].treated ? treated : control).push_back(i);
  }
  if (control.empty()) throw DataError("control pool is empty");
  if (treated.empty()) throw DataError("no treated members to match");

  std::vector<double> lg(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) lg[i] = logit(scores[i]);

  MatchResult r;
  if (options.caliper) {
    r.caliper = *options.caliper;
  } else {
    const double n = static_cast<double>(lg.size());
    const double mean = std::accumulate(lg.begin(), lg.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : lg) ss += (v - mean) * (v - mean);
    r.caliper = options.caliper_sd * (lg.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0);
  }

  Rng rng(options.seed);
  rng.shuffle(treated);
  std::vector<bool> used(members.size(), false);
  for (std::size_t ti : treated) {
    std::size_t best = members.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t ci : control) {
      if (used[ci]) continue;
      const double d = std::abs(lg[ti] - lg[ci]);
      if (d < best_d) {
        best_d = d;
        best = ci;
      }
    }
    if (best == members.size() || best_d > r.caliper) {
      ++r.unmatched_treated;
      continue;
    }
    used[best] = true;
    r.pairs.push_back({ti, best, best_d});
  }
  if (r.pairs.empty()) throw DataError("no treated member has a control within the caliper");
  return r;
}

double standardized_mean_difference(const std::vector<double>& treated,
                                    const std::vector<double>& control) {
  auto moments = [](const std::vector<double>& v, double& mean, double& var) {
    mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    var = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
  };
  if (treated.empty() || control.empty()) throw DataError("SMD needs non-empty groups");
  double mt, vt, mc, vc;
  moments(treated, mt, vt);
  moments(control, mc, vc);
  const double pooled = std::sqrt(0.5 * (vt + vc));
  const double diff = std::abs(mt - mc);
  if (pooled == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / pooled;
}

BalanceReport balance_report(const std::vector<CohortMember>& members) {
  struct Term {
    const char* name;
    double threshold;
    double (*f)(const CohortMember&);
  };
  static const Term terms[] = {
      {"age", kCovariateThreshold, [](const CohortMember& m) { return m.age; }},
      {"gender", kCovariateThreshold, [](const CohortMember& m) { return double(m.gender); }},
      {"age^2", kHigherOrderThreshold, [](const CohortMember& m) { return m.age * m.age; }},
      {"gender^2", kHigherOrderThreshold,
       [](const CohortMember& m) { return double(m.gender * m.gender); }},
      {"age*gender", kHigherOrderThreshold,
       [](const CohortMember& m) { return m.age * m.gender; }},
  };
  BalanceReport r;
  r.all_pass = true;
  for (const Term& term : terms) {
    std::vector<double> t, c;
    for (const auto& m : members) (m.treated ? t : c).push_back(term.f(m));
    SmdEntry e;
    e.term = term.name;
    e.threshold = term.threshold;
    e.smd = standardized_mean_difference(t, c);
    e.pass = e.smd < e.threshold;
    r.all_pass = r.all_pass && e.pass;
    r.entries.push_back(e);
  }
  return r;
}

}  // namespace adress::matching
