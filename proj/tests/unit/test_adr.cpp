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
#include <cmath>
#include <limits>
#include <vector>

#include "adress/adr/adr.hpp"
#include "adress/common/error.hpp"
#include "adress/common/random.hpp"
#include "adress/features/feature_table.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace adress;
using namespace adress::adr;
using adress::testing::kmeans2;
using adress::testing::two_blobs;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal(3.0 * j, 1.0 + j);
  }
  return m;
}

features::FrameFeatureMatrix frames_from(const Matrix& m, const std::string& id = "rec") {
  features::FrameFeatureMatrix out;
  out.recording_id = id;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    features::FrameFeatureVector v;
    v.frame_index = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < features::kFeatureCount; ++j) {
      v.values[j] = m(i, static_cast<Eigen::Index>(j));
    }
    out.rows.push_back(v);
  }
  return out;
}

// Codebook whose nodes sit at 0, 1, ..., C-1 along every axis, with an
// identity standardizer.
SomCodebook ladder_codebook(std::size_t c_count, std::size_t dim) {
  SomCodebook cb;
  cb.weights.resize(static_cast<Eigen::Index>(c_count), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < c_count; ++c) {
    cb.weights.row(static_cast<Eigen::Index>(c)).setConstant(static_cast<double>(c));
  }
  return cb;
}

StandardizationStats identity_stats(std::size_t dim) {
  StandardizationStats s;
  s.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  s.stddev = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim));
  s.zero_variance.assign(dim, false);
  return s;
}

}  // namespace

TEST_CASE("standardizer on two frames gives -1 and +1") {
  Matrix m(2, 88);
  m.row(0).setZero();
  m.row(1).setConstant(2.0);
  const auto s = fit_standardizer(m);
  CHECK(s.mean.isConstant(1.0));
  CHECK(s.stddev.isConstant(1.0));
  const Matrix z = s.transform(m);
  CHECK(z.row(0).isConstant(-1.0));
  CHECK(z.row(1).isConstant(1.0));
  CHECK(std::none_of(s.zero_variance.begin(), s.zero_variance.end(), [](bool b) { return b; }));
}

TEST_CASE("constant column is flagged and scaled by 1") {
  Matrix m = random_matrix(20, 5, 1);
  m.col(2).setConstant(4.5);
  const auto s = fit_standardizer(m);
  CHECK(s.zero_variance[2]);
  CHECK_FALSE(s.zero_variance[1]);
  CHECK(s.stddev[2] == 1.0);
  CHECK(s.transform(m).col(2).isZero());
}

TEST_CASE("standardized random matrix has zero mean and unit variance") {
  const Matrix m = random_matrix(1000, 88, 2);
  const Matrix z = fit_standardizer(m).transform(m);
  // Moments recomputed column by column with plain loops, in reverse order.
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    double sum = 0.0;
    for (Eigen::Index i = z.rows() - 1; i >= 0; --i) sum += z(i, j);
    const double mean = sum / z.rows();
    double ss = 0.0;
    for (Eigen::Index i = z.rows() - 1; i >= 0; --i) ss += (z(i, j) - mean) * (z(i, j) - mean);
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(ss / z.rows()) - 1.0) < 1e-9);
  }
}

TEST_CASE("standardizer rejects fewer than two frames and wrong widths") {
  CHECK_THROWS_AS(fit_standardizer(Matrix(1, 88)), DataError);
  const auto s = fit_standardizer(random_matrix(10, 4, 3));
  CHECK_THROWS_AS(s.transform(Matrix(2, 5)), DataError);
}

TEST_CASE("SOM with one node is the data mean") {
  const Matrix m = random_matrix(300, 88, 4);
  SomOptions opt;
  opt.node_count = 1;
  opt.epochs = 20;
  opt.seed = 9;
  const auto cb = train_som(m, opt);
  const Eigen::RowVectorXd mean = m.colwise().mean();
  CHECK((cb.weights.row(0) - mean).cwiseAbs().maxCoeff() < 1e-6);

  double qe = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) qe += (m.row(i) - mean).norm();
  CHECK(cb.quantization_error == doctest::Approx(qe / m.rows()).epsilon(1e-9));
}

TEST_CASE("SOM with two nodes recovers two blobs like k-means") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Matrix raw = two_blobs(seed, {-3.0, 1.0}, {3.0, -1.0}, 150);
    const auto stats = fit_standardizer(raw);
    const Matrix z = stats.transform(raw);
    SomOptions opt;
    opt.node_count = 2;
    opt.epochs = 30;
    opt.seed = seed;
    const auto cb = train_som(z, opt);
    auto oracle = kmeans2(z);
    std::vector<Eigen::Vector2d> nodes{cb.weights.row(0).transpose(), cb.weights.row(1).transpose()};
    std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
    for (int k = 0; k < 2; ++k) CHECK((nodes[k] - oracle[k]).norm() < 0.2);
  }
}

TEST_CASE("SOM training is deterministic and seed-sensitive") {
  const Matrix m = random_matrix(200, 88, 5);
  SomOptions opt;
  opt.node_count = 5;
  opt.epochs = 10;
  opt.seed = 77;
  const auto a = train_som(m, opt);
  const auto b = train_som(m, opt);
  CHECK(a.weights == b.weights);
  CHECK(a.epoch_quantization_error == b.epoch_quantization_error);
  opt.seed = 78;
  CHECK_FALSE(train_som(m, opt).weights == a.weights);
}

TEST_CASE("SOM quantization error falls during training") {
  const Matrix raw = random_matrix(400, 10, 6);
  const Matrix z = fit_standardizer(raw).transform(raw);
  for (std::size_t c : {2u, 5u, 15u}) {
    SomOptions opt;
    opt.node_count = c;
    opt.epochs = 25;
    opt.seed = c;
    const auto cb = train_som(z, opt);
    REQUIRE(cb.epoch_quantization_error.size() == 25);
    CHECK(cb.quantization_error < cb.initial_quantization_error);
    // Online updates at rates near 0.5 make early epochs noisy. Once the rate
    // is below ~0.2 (last 40% of epochs) rises stay within 5%, and the last
    // epoch beats every epoch of the first half.
    const auto& qe = cb.epoch_quantization_error;
    for (std::size_t e = 15; e < qe.size(); ++e) CHECK(qe[e] <= 1.05 * qe[e - 1]);
    CHECK(qe.back() < *std::min_element(qe.begin(), qe.begin() + 12));
    CHECK(cb.weights.allFinite());
  }
}

TEST_CASE("SOM argument checks") {
  const Matrix m = random_matrix(4, 3, 7);
  SomOptions opt;
  opt.node_count = 0;
  CHECK_THROWS_AS(train_som(m, opt), UsageError);
  opt.node_count = 5;
  CHECK_THROWS_AS(train_som(m, opt), DataError);
  opt.node_count = 4;
  CHECK_NOTHROW(train_som(m, opt));
}

TEST_CASE("assign_bmu returns the nearest node, lowest index on ties") {
  const auto cb = ladder_codebook(6, 4);
  CHECK(assign_bmu(cb, Eigen::VectorXd::Constant(4, 3.0)) == 3);
  // Equidistant between node 1 and node 4 (both at squared distance 4 * 2.25).
  CHECK(assign_bmu(cb, Eigen::VectorXd::Constant(4, 2.5)) == 2);
  SomCodebook two;
  two.weights = Matrix(5, 2);
  two.weights << 9, 9, 0, 1, 7, 7, 8, 8, 0, -1;
  CHECK(assign_bmu(two, Eigen::Vector2d(0.0, 0.0)) == 1);

  Rng rng(8);
  SomCodebook random_cb;
  random_cb.weights = random_matrix(12, 6, 9);
  for (int q = 0; q < 200; ++q) {
    Eigen::VectorXd x(6);
    for (int j = 0; j < 6; ++j) x[j] = rng.normal(3.0 * j, 4.0);
    std::size_t brute = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < 12; ++c) {
      double d = 0.0;
      for (int j = 0; j < 6; ++j) d += (x[j] - random_cb.weights(c, j)) * (x[j] - random_cb.weights(c, j));
      if (d < best) {
        best = d;
        brute = static_cast<std::size_t>(c);
      }
    }
    CHECK(assign_bmu(random_cb, x) == brute);
  }
  CHECK_THROWS_AS(assign_bmu(random_cb, Eigen::VectorXd::Zero(5)), DataError);
}

TEST_CASE("represent_recording counts BMU occupancy") {
  const auto cb = ladder_codebook(5, features::kFeatureCount);
  const auto stats = identity_stats(features::kFeatureCount);

  Matrix at2 = Matrix::Constant(10, 88, 2.0);
  auto v = represent_recording(cb, frames_from(at2), stats, 71.0, 1.0);
  CHECK(v.adr == std::vector<double>{0, 0, 1, 0, 0});
  CHECK(v.features() == std::vector<double>{0, 0, 1, 0, 0, 71.0, 1.0});

  Matrix split(10, 88);
  for (int i = 0; i < 10; ++i) split.row(i).setConstant(i % 10 < 3 ? 0.1 : 3.9);
  v = represent_recording(cb, frames_from(split), stats, 60.0, 0.0);
  CHECK(v.adr[0] == doctest::Approx(0.3));
  CHECK(v.adr[4] == doctest::Approx(0.7));
  CHECK(v.adr[1] + v.adr[2] + v.adr[3] == 0.0);

  // Duration statistics: frames 0..2 form one run on node 0 and 3..9 one run
  // on node 4.
  v = represent_recording(cb, frames_from(split), stats, 60.0, 0.0, true);
  REQUIRE(v.adr.size() == 10);
  CHECK(v.adr[5] == 3.0);
  CHECK(v.adr[9] == 7.0);

  const auto one = ladder_codebook(1, features::kFeatureCount);
  CHECK(represent_recording(one, frames_from(random_matrix(7, 88, 10)), stats, 1, 0).adr ==
        std::vector<double>{1.0});

  CHECK_THROWS_AS(represent_recording(cb, features::FrameFeatureMatrix{}, stats, 70, 0), DataError);
}

TEST_CASE("histograms sum to one and ignore frame order") {
  std::vector<features::FrameFeatureMatrix> recs;
  for (int r = 0; r < 6; ++r) recs.push_back(frames_from(random_matrix(20 + 7 * r, 88, 20 + r)));
  SomOptions opt;
  opt.node_count = 10;
  opt.epochs = 5;
  opt.seed = 3;
  const auto model = fit_adr(recs, opt);
  CHECK(model.output_dimension() == 12);
  CHECK(model.feature_table_version == features::kFeatureTableVersion);
  for (auto rec : recs) {
    const auto v = represent_recording(model, rec, 70, 1);
    double sum = 0.0;
    for (double h : v.adr) {
      CHECK(h >= 0.0);
      sum += h;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);

    std::reverse(rec.rows.begin(), rec.rows.end());
    Rng rng(5);
    rng.shuffle(rec.rows);
    CHECK(represent_recording(model, rec, 70, 1).adr == v.adr);
  }
}

TEST_CASE("Rng draws are reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto ia = a.index(7);
    CHECK(ia == b.index(7));
    CHECK(ia < 7);
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  double sum = 0.0, ss = 0.0;
  Rng n(1);
  for (int i = 0; i < 20000; ++i) {
    const double x = n.normal(2.0, 3.0);
    sum += x;
    ss += x * x;
  }
  const double mean = sum / 20000;
  CHECK(mean == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::sqrt(ss / 20000 - mean * mean) == doctest::Approx(3.0).epsilon(0.03));
}
