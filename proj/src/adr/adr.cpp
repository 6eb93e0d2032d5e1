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

#include "adress/adr/adr.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "adress/common/error.hpp"
#include "adress/common/random.hpp"
#include "adress/features/feature_table.hpp"

namespace adress::adr {

Eigen::VectorXd StandardizationStats::transform(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size()) {
    throw DataError("standardizer expects " + std::to_string(mean.size()) +
                    " columns, got " + std::to_string(x.size()));
  }
  return (x - mean).cwiseQuotient(stddev).eval();
}

Matrix StandardizationStats::transform(const Matrix& x) const {
  if (x.cols() != mean.size()) {
    throw DataError("standardizer expects " + std::to_string(mean.size()) +
                    " columns, got " + std::to_string(x.cols()));
  }
  Matrix out = x.rowwise() - mean.transpose();
  out.array().rowwise() /= stddev.transpose().array();
  return out;
}

StandardizationStats fit_standardizer(const Matrix& frames) {
  if (frames.rows() < 2) {
    throw DataError("standardizer needs at least 2 frames, got " +
                    std::to_string(frames.rows()));
  }
  if (!frames.allFinite()) throw DataError("standardizer input contains non-finite values");
  StandardizationStats s;
  s.mean = frames.colwise().mean().transpose();
  const Matrix centered = frames.rowwise() - s.mean.transpose();
  s.stddev = (centered.colwise().squaredNorm().transpose() / static_cast<double>(frames.rows()))
              .cwiseSqrt();
  s.zero_variance.assign(static_cast<std::size_t>(frames.cols()), false);
  for (Eigen::Index j = 0; j < frames.cols(); ++j) {
    // Treat round-off level spread as constant.
    if (!(s.stddev[j] > 1e-12 * std::max(1.0, std::abs(s.mean[j])))) {
      s.stddev[j] = 1.0;
      s.zero_variance[static_cast<std::size_t>(j)] = true;
    }
  }
  return s;
}

namespace {

std::size_t nearest(const Matrix& weights, const double* x, Eigen::Index dim,
                    double* out_distance = nullptr) {
  const Eigen::Map<const Eigen::RowVectorXd> v(x, dim);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < weights.rows(); ++c) {
    const double d = (weights.row(c) - v).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::size_t>(c);
    }
  }
  if (out_distance) *out_distance = std::sqrt(best_d);
  return best;
}

double mean_bmu_distance(const Matrix& weights, const Matrix& frames) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < frames.rows(); ++i) {
    double d = 0.0;
    nearest(weights, frames.row(i).data(), frames.cols(), &d);
    total += d;
  }
  return total / static_cast<double>(frames.rows());
}

}  // namespace

SomCodebook train_som(const Matrix& frames, const SomOptions& options) {
  const auto n = static_cast<std::size_t>(frames.rows());
  const std::size_t c_count = options.node_count;
  if (c_count < 1) throw UsageError("SOM node count must be at least 1");
  if (options.epochs < 0) throw UsageError("SOM epochs must be non-negative");
  if (n < c_count) {
    throw DataError("SOM with " + std::to_string(c_count) + " nodes needs at least as many frames, got " +
                    std::to_string(n));
  }
  if (!frames.allFinite()) throw DataError("SOM input contains non-finite values");

  Rng rng(options.seed);
  SomCodebook cb;
  cb.epochs = options.epochs;
  cb.seed = options.seed;

  // Initialise from distinct frames chosen by a partial Fisher-Yates draw.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < c_count; ++i) {
    std::swap(order[i], order[i + rng.index(n - i)]);
  }
  cb.weights.resize(static_cast<Eigen::Index>(c_count), frames.cols());
  for (std::size_t c = 0; c < c_count; ++c) {
    cb.weights.row(static_cast<Eigen::Index>(c)) = frames.row(static_cast<Eigen::Index>(order[c]));
  }
  cb.initial_quantization_error = mean_bmu_distance(cb.weights, frames);

  const double total = static_cast<double>(options.epochs) * static_cast<double>(n);
  const double r0 = static_cast<double>(c_count) / 2.0;
  std::iota(order.begin(), order.end(), 0);
  std::size_t step = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      const double progress = total > 1.0 ? static_cast<double>(step) / (total - 1.0) : 1.0;
      const double lr = options.learning_rate_start +
                        (options.learning_rate_end - options.learning_rate_start) * progress;
      const double radius = r0 + (options.radius_end - r0) * progress;
      const double two_r2 = 2.0 * radius * radius;
      const auto row = frames.row(static_cast<Eigen::Index>(i));
      const auto bmu = static_cast<double>(nearest(cb.weights, row.data(), frames.cols()));
      for (std::size_t c = 0; c < c_count; ++c) {
        const double dc = static_cast<double>(c) - bmu;
        const double h = std::exp(-dc * dc / two_r2);
        // Beyond ~4 radii the pull is below 1e-3 of the BMU's; skip it.
        if (h < 3e-4) continue;
        auto w = cb.weights.row(static_cast<Eigen::Index>(c));
        w += (lr * h) * (row - w);
      }
      ++step;
    }
    cb.epoch_quantization_error.push_back(mean_bmu_distance(cb.weights, frames));
  }

  if (options.voronoi_polish) {
    Matrix sums = Matrix::Zero(cb.weights.rows(), cb.weights.cols());
    std::vector<std::size_t> counts(c_count, 0);
    for (Eigen::Index i = 0; i < frames.rows(); ++i) {
      const std::size_t b = nearest(cb.weights, frames.row(i).data(), frames.cols());
      sums.row(static_cast<Eigen::Index>(b)) += frames.row(i);
      ++counts[b];
    }
    for (std::size_t c = 0; c < c_count; ++c) {
      if (counts[c] > 0) {
        cb.weights.row(static_cast<Eigen::Index>(c)) =
            sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
      }
    }
  }
  cb.quantization_error = mean_bmu_distance(cb.weights, frames);
  return cb;
}

std::size_t assign_bmu(const SomCodebook& codebook, const Eigen::VectorXd& frame) {
  if (frame.size() != codebook.weights.cols()) {
    throw DataError("frame dimension " + std::to_string(frame.size()) +
                    " does not match codebook dimension " +
                    std::to_string(codebook.weights.cols()));
  }
  return nearest(codebook.weights, frame.data(), frame.size());
}

double quantization_error(const SomCodebook& codebook, const Matrix& frames) {
  if (frames.rows() == 0) return 0.0;
  return mean_bmu_distance(codebook.weights, frames);
}

std::vector<double> RecordingVector::features() const {
  std::vector<double> out = adr;
  out.push_back(age);
  out.push_back(gender);
  return out;
}

Matrix to_matrix(const features::FrameFeatureMatrix& m) {
  Matrix out(static_cast<Eigen::Index>(m.rows.size()),
             static_cast<Eigen::Index>(features::kFeatureCount));
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (std::size_t j = 0; j < features::kFeatureCount; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m.rows[i].values[j];
    }
  }
  return out;
}

Matrix pool_frames(const std::vector<features::FrameFeatureMatrix>& recordings) {
  std::size_t total = 0;
  for (const auto& r : recordings) total += r.rows.size();
  Matrix out(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(features::kFeatureCount));
  Eigen::Index at = 0;
  for (const auto& r : recordings) {
    for (const auto& row : r.rows) {
      for (std::size_t j = 0; j < features::kFeatureCount; ++j) {
        out(at, static_cast<Eigen::Index>(j)) = row.values[j];
      }
      ++at;
    }
  }
  return out;
}

AdrModel fit_adr(const std::vector<features::FrameFeatureMatrix>& recordings,
                 const SomOptions& options, bool duration_stats) {
  AdrModel model;
  const Matrix pooled = pool_frames(recordings);
  model.stats = fit_standardizer(pooled);
  model.codebook = train_som(model.stats.transform(pooled), options);
  model.duration_stats = duration_stats;
  model.feature_table_version = std::string(features::kFeatureTableVersion);
  return model;
}

RecordingVector represent_recording(const SomCodebook& codebook,
                                    const features::FrameFeatureMatrix& matrix,
                                    const StandardizationStats& stats, double age,
                                    double gender, bool duration_stats) {
  if (matrix.rows.empty()) {
    throw DataError("recording '" + matrix.recording_id + "' has no frames to represent");
  }
  const std::size_t c_count = codebook.node_count();
  const Matrix z = stats.transform(to_matrix(matrix));
  if (z.cols() != codebook.weights.cols()) {
    throw DataError("standardizer and codebook dimensions differ");
  }

  std::vector<std::size_t> counts(c_count, 0);
  std::vector<std::size_t> runs(c_count, 0);
  std::size_t prev = c_count;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const std::size_t b = nearest(codebook.weights, z.row(i).data(), z.cols());
    ++counts[b];
    if (b != prev) ++runs[b];
    prev = b;
  }

  RecordingVector v;
  v.recording_id = matrix.recording_id;
  v.age = age;
  v.gender = gender;
  const auto frames = static_cast<double>(z.rows());
  v.adr.reserve((duration_stats ? 2 : 1) * c_count);
  for (std::size_t c = 0; c < c_count; ++c) v.adr.push_back(counts[c] / frames);
  if (duration_stats) {
    for (std::size_t c = 0; c < c_count; ++c) {
      v.adr.push_back(runs[c] > 0 ? static_cast<double>(counts[c]) / runs[c] : 0.0);
    }
  }
  return v;
}

}  // namespace adress::adr
