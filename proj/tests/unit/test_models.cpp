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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "adress/common/error.hpp"
#include "adress/common/random.hpp"
#include "adress/models/grid_search.hpp"
#include "adress/models/logistic.hpp"
#include "adress/models/naive_bayes.hpp"
#include "adress/models/svr.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace adress;
using namespace adress::models;
namespace t = adress::testing;
using t::random_classes;
using t::rbf_matrix;
using t::scaled;

// ---- Naive Bayes ----------------------------------------------------------

TEST_CASE("Silverman bandwidth") {
  const std::vector<double> v{1, 2, 3, 4, 10};
  CHECK(silverman_bandwidth(v) == doctest::Approx(t::oracle_silverman(v)).epsilon(1e-14));
  // IQR of {0,0,0,0,5} is zero, so the sample sd is used.
  const std::vector<double> spike{0, 0, 0, 0, 5};
  CHECK(silverman_bandwidth(spike) ==
        doctest::Approx(1.06 * std::sqrt(5.0) * std::pow(5.0, -0.2)));
  CHECK(silverman_bandwidth(std::vector<double>{3.0}) == doctest::Approx(1.06e-6));
  CHECK(silverman_bandwidth(std::vector<double>(8, 2.0)) ==
        doctest::Approx(1.06e-6 * std::pow(8.0, -0.2)));
}

TEST_CASE("symmetric two-point model ties to CN at the midpoint") {
  const auto m = train_nb({{-1.0}, {1.0}}, {Group::kCN, Group::kAD});
  const double mid[] = {0.0};
  const auto p = predict_nb(m, mid);
  CHECK(p.posterior[0] == doctest::Approx(0.5));
  CHECK(p.posterior[1] == doctest::Approx(0.5));
  CHECK(p.label == Group::kCN);
  const double at_cn[] = {-1.0};
  CHECK(predict_nb(m, at_cn).posterior[0] > 0.5);
  CHECK(predict_nb(m, at_cn).label == Group::kCN);
}

TEST_CASE("query deep in AD support is AD with high posterior") {
  const auto d = random_classes(1, 20, 2, 6.0);
  const auto m = train_nb(d.x, d.y);
  const double q[] = {6.0, 6.0};
  const auto p = predict_nb(m, q);
  CHECK(p.label == Group::kAD);
  CHECK(p.posterior[1] > 0.99);
}

TEST_CASE("KDE posteriors match the direct-sum oracle") {
  const auto d = random_classes(2, 20, 3, 1.5);
  const auto m = train_nb(d.x, d.y);
  Rng rng(3);
  for (int q = 0; q < 100; ++q) {
    std::vector<double> x{rng.normal(0.7, 1.5), rng.normal(0.7, 1.5), rng.normal(0.7, 1.8)};
    const auto oracle = t::oracle_kde_posterior(d.x, d.yi, x);
    const auto p = predict_nb(m, x);
    CHECK(std::abs(p.posterior[1] - oracle[1]) < 1e-10);
    CHECK(std::abs(p.posterior[0] + p.posterior[1] - 1.0) < 1e-12);
    const Group expected = oracle[1] > oracle[0] ? Group::kAD : Group::kCN;
    if (std::abs(oracle[1] - oracle[0]) > 1e-9) CHECK(p.label == expected);
  }
}

TEST_CASE("far-away and extreme queries stay finite") {
  const auto d = random_classes(4, 15, 4, 2.0);
  const auto m = train_nb(d.x, d.y);
  Rng rng(5);
  for (int q = 0; q < 200; ++q) {
    std::vector<double> x;
    for (int j = 0; j < 4; ++j) x.push_back(rng.normal(0.0, 1.0) * std::pow(10.0, rng.uniform(-3, 6)));
    const auto p = predict_nb(m, x);
    CHECK(std::isfinite(p.posterior[0]));
    CHECK(std::isfinite(p.posterior[1]));
    CHECK(std::abs(p.posterior[0] + p.posterior[1] - 1.0) < 1e-12);
  }
}

TEST_CASE("renaming classes flips predictions") {
  const auto d = random_classes(6, 15, 3, 1.0);
  std::vector<Group> flipped;
  for (Group g : d.y) flipped.push_back(g == Group::kAD ? Group::kCN : Group::kAD);
  const auto a = train_nb(d.x, d.y);
  const auto b = train_nb(d.x, flipped);
  Rng rng(7);
  for (int q = 0; q < 50; ++q) {
    std::vector<double> x{rng.normal(0.5, 1.5), rng.normal(0.5, 1.5), rng.normal(0.5, 1.5)};
    const auto pa = predict_nb(a, x);
    const auto pb = predict_nb(b, x);
    CHECK(pa.posterior[0] == doctest::Approx(pb.posterior[1]).epsilon(1e-12));
    if (std::abs(pa.posterior[0] - 0.5) > 1e-12) CHECK(pa.label != pb.label);
  }
}

TEST_CASE("naive Bayes input checks") {
  CHECK_THROWS_AS(train_nb({{1.0}, {2.0}}, {Group::kCN, Group::kCN}), DataError);
  CHECK_THROWS_AS(train_nb({{}, {}}, {Group::kCN, Group::kAD}), DataError);
  const auto m = train_nb({{1.0}, {2.0}}, {Group::kCN, Group::kAD});
  const double two[] = {1.0, 2.0};
  CHECK_THROWS_AS(predict_nb(m, two), DataError);
}

// ---- SVR ------------------------------------------------------------------

TEST_CASE("constant target is predicted everywhere with no support vectors") {
  Rng rng(1);
  std::vector<std::vector<double>> x;
  for (int i = 0; i < 12; ++i) x.push_back({rng.normal(), rng.normal()});
  const auto m = train_svr(x, std::vector<double>(12, 25.0));
  CHECK(m.converged);
  CHECK(m.coefficients.empty());
  for (int i = 0; i < 10; ++i) {
    const double q[] = {rng.normal(0, 3), rng.normal(0, 3)};
    CHECK(predict_svr(m, q) == doctest::Approx(25.0));
  }
}

TEST_CASE("SMO dual objective matches a projected-gradient QP") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Rng rng(seed);
    const int n = 6 + static_cast<int>(seed % 5);
    const int d = 1 + static_cast<int>(seed % 3);
    std::vector<std::vector<double>> x(n);
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) x[i].push_back(rng.normal());
      y[i] = 20.0 + 3.0 * std::sin(2.0 * x[i][0]) + rng.normal(0.0, 1.0);
    }
    SvrOptions opt;
    opt.gamma = 0.8;
    opt.tolerance = 1e-6;
    const auto m = train_svr(x, y, opt);
    const auto oracle = t::oracle_svr_dual(rbf_matrix(scaled(x), 0.8), y, 0.5, 1.0);
    CHECK(m.converged);
    CHECK(std::abs(m.dual_objective - oracle.objective) < 1e-4);
    CHECK(m.dual_objective >= oracle.objective - 1e-4);
    CHECK(std::abs(m.coefficient_sum) < 1e-3);
    for (double c : m.coefficients) CHECK(std::abs(c) <= 1.0 + 1e-12);
  }
}

TEST_CASE("SVR satisfies the KKT conditions") {
  Rng rng(11);
  std::vector<std::vector<double>> x(30);
  std::vector<double> y(30);
  for (int i = 0; i < 30; ++i) {
    x[i] = {rng.normal(), rng.normal(), rng.normal()};
    y[i] = 18.0 + 4.0 * x[i][0] - 2.0 * x[i][1] * x[i][1] + rng.normal(0, 0.5);
  }
  SvrOptions opt;
  opt.tolerance = 1e-5;
  const auto m = train_svr(x, y, opt);
  REQUIRE(m.converged);
  // Points strictly inside the tube carry no weight; free support vectors sit
  // on the tube edge; bounded ones lie outside it.
  std::map<std::size_t, double> coef;
  for (std::size_t s = 0; s < m.support_indices.size(); ++s) coef[m.support_indices[s]] = m.coefficients[s];
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - svr_decision(m, x[i]);
    const double c = coef.count(i) ? coef[i] : 0.0;
    if (c == 0.0) CHECK(std::abs(r) <= 0.5 + 1e-3);
    else if (std::abs(c) < 1.0 - 1e-9) CHECK(std::abs(std::abs(r) - 0.5) < 1e-3);
    else CHECK(std::abs(r) >= 0.5 - 1e-3);
    if (c != 0.0) CHECK((c > 0) == (r > 0));
  }
}

TEST_CASE("duplicating the training set leaves predictions unchanged when the box is slack") {
  Rng rng(21);
  std::vector<std::vector<double>> x(8);
  std::vector<double> y(8);
  for (int i = 0; i < 8; ++i) {
    x[i] = {rng.normal(), rng.normal()};
    y[i] = 22.0 + 0.8 * x[i][0];
  }
  SvrOptions opt;
  opt.tolerance = 1e-8;
  opt.epsilon = 0.1;
  opt.box = 10.0;
  const auto a = train_svr(x, y, opt);
  double max_coef = 0;
  for (double c : a.coefficients) max_coef = std::max(max_coef, std::abs(c));
  REQUIRE(max_coef < 5.0);

  auto x2 = x;
  x2.insert(x2.end(), x.begin(), x.end());
  auto y2 = y;
  y2.insert(y2.end(), y.begin(), y.end());
  const auto b = train_svr(x2, y2, opt);
  for (int q = 0; q < 20; ++q) {
    const double p[] = {rng.normal(), rng.normal()};
    CHECK(svr_decision(a, p) == doctest::Approx(svr_decision(b, p)).epsilon(1e-5));
  }
}

TEST_CASE("SVR interpolates within the tube and decays to the bias") {
  std::vector<std::vector<double>> x{{0.0}, {1.0}, {2.0}, {3.0}, {4.0}};
  std::vector<double> y{10, 14, 12, 18, 15};
  SvrOptions opt;
  opt.box = 100.0;
  opt.gamma = 2.0;
  opt.tolerance = 1e-8;
  const auto m = train_svr(x, y, opt);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(predict_svr(m, x[i]) - y[i]) <= 0.5 + 1e-6);
  const double far[] = {1e3};
  CHECK(svr_decision(m, far) == doctest::Approx(m.bias));
}

TEST_CASE("predictions are clamped to the MMSE range") {
  std::vector<std::vector<double>> x{{0.0}, {1.0}, {2.0}};
  SvrOptions opt;
  opt.box = 1000.0;
  const auto high = train_svr(x, {33.2, 33.2, 33.2}, opt);
  const double q[] = {1.0};
  CHECK(svr_decision(high, q) == doctest::Approx(33.2).epsilon(0.02));
  CHECK(predict_svr(high, q) == 30.0);
  const auto low = train_svr(x, {-4.0, -4.0, -4.0}, opt);
  CHECK(predict_svr(low, q) == 0.0);
}

TEST_CASE("SVR iteration cap is flagged") {
  Rng rng(31);
  std::vector<std::vector<double>> x(40);
  std::vector<double> y(40);
  for (int i = 0; i < 40; ++i) {
    x[i] = {rng.normal()};
    y[i] = rng.uniform(0, 30);
  }
  SvrOptions opt;
  opt.max_iterations = 3;
  const auto m = train_svr(x, y, opt);
  CHECK_FALSE(m.converged);
  CHECK(m.iterations == 3);
  CHECK(std::abs(m.coefficient_sum) < 1e-9);
}

TEST_CASE("SVR input checks") {
  CHECK_THROWS_AS(train_svr({{1.0}}, {1.0}), DataError);
  SvrOptions opt;
  opt.gamma = 0.0;
  CHECK_THROWS_AS(train_svr({{1.0}, {2.0}}, {1.0, 2.0}, opt), UsageError);
  const auto m = train_svr({{1.0}, {2.0}}, {1.0, 2.0});
  const double two[] = {1.0, 2.0};
  CHECK_THROWS_AS(predict_svr(m, two), DataError);
}

// ---- Logistic regression --------------------------------------------------

TEST_CASE("independent treatment gives intercept logit(mean) and zero slopes") {
  // Every covariate pattern carries exactly 30% treated.
  std::vector<std::vector<double>> x;
  std::vector<int> tr;
  for (int age = 60; age < 80; age += 2) {
    for (int g = 0; g < 2; ++g) {
      for (int k = 0; k < 10; ++k) {
        x.push_back({static_cast<double>(age), static_cast<double>(g)});
        tr.push_back(k < 3 ? 1 : 0);
      }
    }
  }
  const auto m = fit_logistic(x, tr);
  CHECK(m.converged);
  CHECK_FALSE(m.separated);
  CHECK(m.intercept == doctest::Approx(std::log(0.3 / 0.7)).epsilon(1e-8));
  CHECK(std::abs(m.weights[0]) < 1e-9);
  CHECK(std::abs(m.weights[1]) < 1e-9);
}

TEST_CASE("perfectly separating covariate is flagged") {
  const auto m = fit_logistic({{-1.0}, {-1.0}, {1.0}, {1.0}}, {0, 0, 1, 1});
  CHECK(m.separated);
  CHECK_FALSE(m.converged);
}

TEST_CASE("logistic fit maximises the likelihood") {
  Rng rng(41);
  std::vector<std::vector<double>> x(100);
  std::vector<int> tr(100);
  for (int i = 0; i < 100; ++i) {
    x[i] = {rng.normal(), rng.normal()};
    const double p = 1.0 / (1.0 + std::exp(-(0.3 + 1.2 * x[i][0] - 0.7 * x[i][1])));
    tr[i] = rng.uniform() < p ? 1 : 0;
  }
  const auto m = fit_logistic(x, tr);
  REQUIRE(m.converged);
  CHECK(m.gradient_norm < 1e-6);

  // Zooming grid search over (b0, b1, b2).
  std::array<double, 3> centre{0, 0, 0};
  double half = 4.0;
  double best = -1e300;
  for (int round = 0; round < 40; ++round) {
    std::array<double, 3> arg = centre;
    for (int i = -5; i <= 5; ++i) {
      for (int j = -5; j <= 5; ++j) {
        for (int k = -5; k <= 5; ++k) {
          const std::array<double, 3> w{centre[0] + half * i / 5, centre[1] + half * j / 5,
                                        centre[2] + half * k / 5};
          double ll = 0;
          for (int n = 0; n < 100; ++n) {
            const double eta = w[0] + w[1] * x[n][0] + w[2] * x[n][1];
            ll += tr[n] ? -std::log1p(std::exp(-eta)) : -std::log1p(std::exp(eta));
          }
          if (ll > best) {
            best = ll;
            arg = w;
          }
        }
      }
    }
    centre = arg;
    half *= 0.5;
  }
  CHECK(std::abs(m.log_likelihood - best) < 1e-4);
  CHECK(m.log_likelihood >= best - 1e-9);
  CHECK(m.intercept == doctest::Approx(centre[0]).epsilon(1e-3));
}

TEST_CASE("logistic input checks") {
  CHECK_THROWS_AS(fit_logistic({{1.0, 2.0}}, {1}), DataError);
  CHECK_THROWS_AS(fit_logistic({{1.0}, {2.0}}, {1, 2}), DataError);
}

// ---- Grid search ----------------------------------------------------------

TEST_CASE("grid search picks the best score, ties to the smallest C") {
  CHECK(select_candidate({15}, {0.3}, Objective::kAccuracy).chosen == 15);
  CHECK(select_candidate({5, 10, 15, 20, 25}, {0.6, 0.7, 0.8, 0.75, 0.8}, Objective::kAccuracy).chosen == 15);
  CHECK(select_candidate({25, 20, 15, 10, 5}, {0.8, 0.75, 0.8, 0.7, 0.6}, Objective::kAccuracy).chosen == 15);
  CHECK(select_candidate({5, 10, 15, 20, 25}, {5.1, 4.9, 5.0, 4.7, 4.7}, Objective::kRmse).chosen == 20);
  CHECK(select_candidate({10, 5}, {0.5, 0.5}, Objective::kAccuracy).chosen == 5);
  CHECK_THROWS_AS(select_candidate({}, {}, Objective::kRmse), UsageError);
  CHECK_THROWS_AS(select_candidate({5}, {std::nan("")}, Objective::kRmse), NumericalError);
}

TEST_CASE("grid search evaluates every candidate and names a failing one") {
  std::atomic<int> calls{0};
  const auto r = grid_search(kDefaultCandidates, Objective::kRmse, [&](int c) {
    ++calls;
    return std::abs(c - 17.0);
  });
  CHECK(calls == 5);
  CHECK(r.chosen == 15);
  CHECK(r.scores == std::vector<double>{12, 7, 2, 3, 8});

  try {
    grid_search({5, 10}, Objective::kAccuracy, [](int c) -> double {
      if (c == 10) throw DataError("boom");
      return 0.5;
    });
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("C=10") != std::string::npos);
  }
}

TEST_CASE("stratified folds balance strata and are seeded") {
  std::vector<int> strata;
  for (int i = 0; i < 50; ++i) strata.push_back(i < 20 ? 1 : 0);
  const auto f = stratified_folds(strata, 5, 9);
  CHECK(f == stratified_folds(strata, 5, 9));
  std::map<int, std::array<int, 2>> counts;
  for (std::size_t i = 0; i < f.size(); ++i) ++counts[f[i]][strata[i]];
  CHECK(counts.size() == 5);
  for (const auto& [fold, c] : counts) {
    CHECK(c[1] == 4);
    CHECK(c[0] == 6);
  }
  CHECK_THROWS_AS(stratified_folds({0, 1}, 5, 1), DataError);
}
