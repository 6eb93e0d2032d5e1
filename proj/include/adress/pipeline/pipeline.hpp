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

#ifndef ADRESS_PIPELINE_PIPELINE_HPP_
#define ADRESS_PIPELINE_PIPELINE_HPP_

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adress/audio/loudness.hpp"
#include "adress/eval/metrics.hpp"
#include "adress/features/extractor.hpp"
#include "adress/models/grid_search.hpp"
#include "adress/pipeline/config.hpp"
#include "adress/pipeline/manifest.hpp"
#include "adress/pipeline/persistence.hpp"

namespace adress::pipeline {

// Stage names used in seeds and error messages.
inline constexpr char kStageSom[] = "adr.som";
inline constexpr char kStageFolds[] = "grid.folds";
inline constexpr char kStageMatching[] = "matching";

using Logger = std::function<void(const std::string&)>;

struct RecordingFeatures {
  ManifestEntry entry;
  audio::LoudnessReport loudness;
  features::FrameFeatureMatrix matrix;
};

// load -> loudness normalization -> frame features, per recording on a
// worker pool. With a cache directory, matrices are reused when the audio
// samples and the loudness/feature settings are unchanged. Failures are
// rethrown with the stage and recording id prepended.
std::vector<RecordingFeatures> extract_corpus(
    const Manifest& manifest, const PipelineConfig& config,
    const std::optional<std::filesystem::path>& cache_dir = std::nullopt,
    const Logger& log = nullptr);

adr::SomOptions som_options(const PipelineConfig& config, int node_count);

TaskModel train_task(const std::vector<RecordingFeatures>& train, eval::Task task,
                     const PipelineConfig& config, int node_count);

struct Prediction {
  std::string id;
  Group label = Group::kCN;
  std::array<double, 2> posterior{};
  double mmse = 0.0;
};

// Uses only frames, age and gender of each recording.
std::vector<Prediction> predict_task(const TaskModel& model,
                                     const std::vector<RecordingFeatures>& recordings,
                                     int threads = 0);

// task 1: id,label,posterior_ad   task 2: id,mmse
std::string predictions_csv(const std::vector<Prediction>& predictions, eval::Task task);
// (id, value) pairs from a predictions file, value = label or MMSE text.
std::vector<std::pair<std::string, std::string>> read_predictions(const std::filesystem::path& path,
                                                                  eval::Task task);

// Stratified k-fold CV over the training recordings for every candidate C.
// Score = accuracy or RMSE over the pooled out-of-fold predictions.
models::GridSearchResult grid_search_task(const std::vector<RecordingFeatures>& train,
                                          eval::Task task, const PipelineConfig& config);

struct RunOptions {
  std::filesystem::path out_dir;
  std::vector<eval::Task> tasks{eval::Task::kClassification, eval::Task::kRegression};
  bool grid_search = false;
  Logger log;
};

struct TaskOutcome {
  eval::Task task = eval::Task::kClassification;
  int node_count = 0;
  std::optional<models::GridSearchResult> grid;
  std::vector<Prediction> predictions;
  std::optional<eval::SubmissionReport> report;  // when the test set is labelled
  std::filesystem::path directory;
};

struct RunSummary {
  std::string config_hash;
  std::filesystem::path run_dir;
  std::vector<TaskOutcome> tasks;
};

// End to end: features for both manifests, then for each task ADR + learner
// fit on the training set and predictions for the test set. Test labels are
// removed before feature extraction and only used to score the written
// predictions file.
RunSummary run_pipeline(const PipelineConfig& config, const Manifest& train, const Manifest& test,
                        const RunOptions& options);

std::string_view task_name(eval::Task task);
std::optional<eval::Task> parse_task(std::string_view s);

}  // namespace adress::pipeline

#endif  // ADRESS_PIPELINE_PIPELINE_HPP_
