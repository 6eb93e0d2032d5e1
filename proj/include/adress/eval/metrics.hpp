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

#ifndef ADRESS_EVAL_METRICS_HPP_
#define ADRESS_EVAL_METRICS_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adress/common/group.hpp"

namespace adress::eval {

// Positive class is AD.
struct ConfusionMatrix {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const { return tp + fp + tn + fn; }
};

ConfusionMatrix confusion_matrix(const std::vector<Group>& predicted,
                                 const std::vector<Group>& actual);

// nullopt marks a ratio whose denominator is zero.
using Metric = std::optional<double>;

struct ClassificationMetrics {
  Metric accuracy;
  Metric sensitivity;  // recall on AD
  Metric specificity;
  Metric precision;
  Metric f1;
};

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm);

struct RegressionReport {
  double rmse = 0.0;
  Metric pearson_r;  // undefined if either vector has zero variance
  Metric r_squared;  // 1 - SS_res / SS_tot; undefined if actuals are constant
  std::size_t n = 0;
};

RegressionReport regression_metrics(std::span<const double> predicted,
                                    std::span<const double> actual);

enum class Task { kClassification = 1, kRegression = 2 };

struct Reference {
  std::string id;
  std::optional<Group> group;
  std::optional<double> mmse;
};

struct SubmissionReport {
  Task task = Task::kClassification;
  std::size_t n = 0;
  ConfusionMatrix confusion;
  ClassificationMetrics classification;
  RegressionReport regression;
  // accuracy for task 1 (higher is better), RMSE for task 2 (lower is better)
  Metric ranking_key;
};

// Joins predictions to the reference by id. `predictions` maps id to the raw
// label ("CN"/"AD") or MMSE text. Every reference id must be predicted
// exactly once; otherwise DataError lists the offending ids.
SubmissionReport score_submission(const std::vector<std::pair<std::string, std::string>>& predictions,
                                  const std::vector<Reference>& reference, Task task);

std::string format_metric(const Metric& m);
std::string report_text(const SubmissionReport& r);
std::string report_csv(const SubmissionReport& r);

}  // namespace adress::eval

#endif  // ADRESS_EVAL_METRICS_HPP_
