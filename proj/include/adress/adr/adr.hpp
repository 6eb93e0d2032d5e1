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

#ifndef ADRESS_ADR_ADR_HPP_
#define ADRESS_ADR_ADR_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adress/features/extractor.hpp"

namespace adress::adr {

// Rows are frames, columns are features.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct StandardizationStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
  // Columns whose population std was zero; their stddev is stored as 1.
  std::vector<bool> zero_variance;

  std::size_t dimension() const { return static_cast<std::size_t>(mean.size()); }
  Eigen::VectorXd transform(const Eigen::VectorXd& x) const;
  Matrix transform(const Matrix& x) const;
};

// Population moments over all rows. Requires at least two rows.
StandardizationStats fit_standardizer(const Matrix& frames);

struct SomOptions {
  std::size_t node_count = 15;
  int epochs = 100;
  std::uint64_t seed = 0;
  double learning_rate_start = 0.5;
  double learning_rate_end = 0.01;
  // Neighbourhood radius runs from node_count / 2 down to this.
  double radius_end = 0.5;
  // After the online phase, move each node to the centroid of the frames it
  // wins (one Lloyd step). Nodes that win nothing keep their weights.
  bool voronoi_polish = true;
};

struct SomCodebook {
  Matrix weights;  // node_count x dimension, nodes on a 1-D chain
  int epochs = 0;
  std::uint64_t seed = 0;
  // Mean Euclidean distance from each training frame to its BMU: before
  // training, after every epoch, and final (after polishing).
  double initial_quantization_error = 0.0;
  std::vector<double> epoch_quantization_error;
  double quantization_error = 0.0;

  std::size_t node_count() const { return static_cast<std::size_t>(weights.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(weights.cols()); }
};

// Online SOM with linear learning-rate and radius decay. Deterministic for
// fixed (frames, options).
SomCodebook train_som(const Matrix& frames, const SomOptions& options);

// Nearest node by Euclidean distance; ties go to the lowest index.
std::size_t assign_bmu(const SomCodebook& codebook, const Eigen::VectorXd& frame);

double quantization_error(const SomCodebook& codebook, const Matrix& frames);

struct RecordingVector {
  std::string recording_id;
  // BMU occupancy histogram (sums to 1), optionally followed by the mean
  // run length in frames of consecutive visits to each node.
  std::vector<double> adr;
  double age = 0.0;
  double gender = 0.0;  // 0 = male, 1 = female

  // adr followed by age and gender; what the learners see.
  std::vector<double> features() const;
};

struct AdrModel {
  StandardizationStats stats;
  SomCodebook codebook;
  bool duration_stats = false;
  std::string feature_table_version;

  std::size_t node_count() const { return codebook.node_count(); }
  std::size_t output_dimension() const {
    return (duration_stats ? 2 : 1) * node_count() + 2;
  }
};

Matrix to_matrix(const features::FrameFeatureMatrix& m);
Matrix pool_frames(const std::vector<features::FrameFeatureMatrix>& recordings);

// Standardize the pooled frames and train the SOM on them.
AdrModel fit_adr(const std::vector<features::FrameFeatureMatrix>& recordings,
                 const SomOptions& options, bool duration_stats = false);

RecordingVector represent_recording(const SomCodebook& codebook,
                                    const features::FrameFeatureMatrix& matrix,
                                    const StandardizationStats& stats, double age,
                                    double gender, bool duration_stats = false);

inline RecordingVector represent_recording(const AdrModel& model,
                                           const features::FrameFeatureMatrix& matrix,
                                           double age, double gender) {
  return represent_recording(model.codebook, matrix, model.stats, age, gender,
                             model.duration_stats);
}

}  // namespace adress::adr

#endif  // ADRESS_ADR_ADR_HPP_
