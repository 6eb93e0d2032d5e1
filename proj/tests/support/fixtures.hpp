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

#ifndef ADRESS_TESTS_SUPPORT_FIXTURES_HPP_
#define ADRESS_TESTS_SUPPORT_FIXTURES_HPP_

// Synthetic inputs shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "adress/adr/adr.hpp"
#include "adress/audio/recording.hpp"
#include "adress/common/group.hpp"
#include "adress/common/random.hpp"
#include "adress/features/lld.hpp"
#include "adress/matching/matching.hpp"

namespace adress::testing {

inline audio::FrameSlice make_frame(std::vector<double> samples, int sample_rate = 16000) {
  audio::FrameSlice f;
  f.recording_id = "frame";
  f.sample_rate = sample_rate;
  f.samples = std::move(samples);
  return f;
}

inline double median_voiced_semitone(const features::LldSeries& s) {
  std::vector<double> v;
  for (std::size_t i = 0; i < s.count; ++i) {
    if (s.voiced[i]) v.push_back(s.f0_semitone[i]);
  }
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

inline adr::Matrix two_blobs(std::uint64_t seed, Eigen::Vector2d a, Eigen::Vector2d b, int per_blob) {
  Rng rng(seed);
  adr::Matrix m(2 * per_blob, 2);
  for (int i = 0; i < 2 * per_blob; ++i) {
    const Eigen::Vector2d& c = i < per_blob ? a : b;
    m(i, 0) = c[0] + rng.normal(0.0, 0.3);
    m(i, 1) = c[1] + rng.normal(0.0, 0.3);
  }
  return m;
}

// Treated members are older and more often female by construction.
inline std::vector<matching::CohortMember> confounded_cohort(std::uint64_t seed, int treated, int control) {
  Rng rng(seed);
  std::vector<matching::CohortMember> out;
  for (int i = 0; i < treated + control; ++i) {
    const bool t = i < treated;
    matching::CohortMember m;
    m.id = (t ? "ad" : "cn") + std::to_string(i);
    m.treated = t;
    m.age = std::clamp(rng.normal(t ? 74.0 : 68.0, 7.0), 50.0, 95.0);
    m.gender = rng.uniform() < (t ? 0.65 : 0.45) ? 1 : 0;
    out.push_back(m);
  }
  return out;
}

struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<Group> y;
  std::vector<int> yi;
};

inline Dataset random_classes(std::uint64_t seed, int per_class, int dim, double shift) {
  Rng rng(seed);
  Dataset d;
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < per_class; ++i) {
      std::vector<double> row;
      for (int j = 0; j < dim; ++j) row.push_back(rng.normal(c * shift * (j + 1) / dim, 1.0 + 0.3 * j));
      d.x.push_back(row);
      d.y.push_back(static_cast<Group>(c));
      d.yi.push_back(c);
    }
  }
  return d;
}

inline std::vector<std::vector<double>> scaled(const std::vector<std::vector<double>>& x) {
  const std::size_t n = x.size(), d = x[0].size();
  std::vector<std::vector<double>> z = x;
  for (std::size_t j = 0; j < d; ++j) {
    double m = 0, ss = 0;
    for (const auto& r : x) m += r[j] / n;
    for (const auto& r : x) ss += (r[j] - m) * (r[j] - m);
    const double sd = ss > 0 ? std::sqrt(ss / n) : 1.0;
    for (auto& r : z) r[j] = (r[j] - m) / sd;
  }
  return z;
}

inline std::vector<std::vector<double>> rbf_matrix(const std::vector<std::vector<double>>& z, double gamma) {
  std::vector<std::vector<double>> k(z.size(), std::vector<double>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      double d = 0;
      for (std::size_t c = 0; c < z[i].size(); ++c) d += (z[i][c] - z[j][c]) * (z[i][c] - z[j][c]);
      k[i][j] = std::exp(-gamma * d);
    }
  }
  return k;
}

}  // namespace adress::testing

#endif  // ADRESS_TESTS_SUPPORT_FIXTURES_HPP_
