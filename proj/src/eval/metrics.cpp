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

#include "adress/eval/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "adress/common/error.hpp"

namespace adress::eval {

namespace {

Metric ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

std::string join(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
  return out;
}

}  // namespace

ConfusionMatrix confusion_matrix(const std::vector<Group>& predicted,
                                 const std::vector<Group>& actual) {
  if (predicted.size() != actual.size()) throw DataError("predicted and actual labels differ in count");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const bool p = predicted[i] == Group::kAD;
    const bool a = actual[i] == Group::kAD;
    if (p && a) ++cm.tp;
    else if (p) ++cm.fp;
    else if (a) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm) {
  if (cm.tp < 0 || cm.fp < 0 || cm.tn < 0 || cm.fn < 0) throw DataError("negative confusion count");
  if (cm.total() == 0) throw DataError("empty confusion matrix");
  ClassificationMetrics m;
  m.accuracy = ratio(cm.tp + cm.tn, cm.total());
  m.sensitivity = ratio(cm.tp, cm.tp + cm.fn);
  m.specificity = ratio(cm.tn, cm.tn + cm.fp);
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.f1 = ratio(2.0 * cm.tp, 2.0 * cm.tp + cm.fp + cm.fn);
  return m;
}

RegressionReport regression_metrics(std::span<const double> predicted,
                                    std::span<const double> actual) {
  if (predicted.size() != actual.size()) throw DataError("predicted and actual scores differ in length");
  if (actual.empty()) throw DataError("regression metrics need at least one pair");
  const double n = static_cast<double>(actual.size());
  double mp = 0.0, ma = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    mp += predicted[i];
    ma += actual[i];
  }
  mp /= n;
  ma /= n;
  double sse = 0.0, spp = 0.0, saa = 0.0, spa = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = predicted[i] - actual[i];
    sse += e * e;
    spp += (predicted[i] - mp) * (predicted[i] - mp);
    saa += (actual[i] - ma) * (actual[i] - ma);
    spa += (predicted[i] - mp) * (actual[i] - ma);
  }
  RegressionReport r;
  r.n = actual.size();
  r.rmse = std::sqrt(sse / n);
  if (spp > 0.0 && saa > 0.0) r.pearson_r = std::clamp(spa / std::sqrt(spp * saa), -1.0, 1.0);
  if (saa > 0.0) r.r_squared = 1.0 - sse / saa;
  return r;
}

SubmissionReport score_submission(const std::vector<std::pair<std::string, std::string>>& predictions,
                                  const std::vector<Reference>& reference, Task task) {
  std::map<std::string, std::string> by_id;
  std::vector<std::string> duplicates;
  for (const auto& [id, value] : predictions) {
    if (!by_id.emplace(id, value).second) duplicates.push_back(id);
  }
  if (!duplicates.empty()) throw DataError("duplicate prediction ids: " + join(duplicates));
  std::vector<std::string> missing;
  std::set<std::string> ref_ids;
  for (const auto& ref : reference) {
    if (!ref_ids.insert(ref.id).second) throw DataError("duplicate reference id: " + ref.id);
    if (!by_id.count(ref.id)) missing.push_back(ref.id);
  }
  if (!missing.empty()) throw DataError("missing predictions for ids: " + join(missing));
  std::vector<std::string> extra;
  for (const auto& [id, value] : by_id) {
    if (!ref_ids.count(id)) extra.push_back(id);
  }
  if (!extra.empty()) throw DataError("predictions for unknown ids: " + join(extra));

  SubmissionReport r;
  r.task = task;
  r.n = reference.size();
  if (task == Task::kClassification) {
    std::vector<Group> predicted, actual;
    for (const auto& ref : reference) {
      if (!ref.group) throw DataError("reference '" + ref.id + "' has no group label");
      const auto g = parse_group(by_id[ref.id]);
      if (!g) throw DataError("prediction for '" + ref.id + "' is not CN or AD: " + by_id[ref.id]);
      predicted.push_back(*g);
      actual.push_back(*ref.group);
    }
    r.confusion = confusion_matrix(predicted, actual);
    r.classification = classification_metrics(r.confusion);
    r.ranking_key = r.classification.accuracy;
  } else {
    std::vector<double> predicted, actual;
    for (const auto& ref : reference) {
      if (!ref.mmse) throw DataError("reference '" + ref.id + "' has no MMSE score");
      const std::string& text = by_id[ref.id];
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw DataError("prediction for '" + ref.id + "' is not a number: " + text);
      }
      predicted.push_back(v);
      actual.push_back(*ref.mmse);
    }
    r.regression = regression_metrics(predicted, actual);
    r.ranking_key = r.regression.rmse;
  }
  return r;
}

std::string format_metric(const Metric& m) {
  if (!m) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *m);
  return buf;
}

std::string report_text(const SubmissionReport& r) {
  std::ostringstream os;
  if (r.task == Task::kClassification) {
    const auto& c = r.confusion;
    os << "task: classification (positive class AD)\n"
       << "n: " << r.n << "\n"
       << "confusion: tp=" << c.tp << " fp=" << c.fp << " tn=" << c.tn << " fn=" << c.fn << "\n"
       << "accuracy: " << format_metric(r.classification.accuracy) << "\n"
       << "sensitivity: " << format_metric(r.classification.sensitivity) << "\n"
       << "specificity: " << format_metric(r.classification.specificity) << "\n"
       << "precision: " << format_metric(r.classification.precision) << "\n"
       << "f1: " << format_metric(r.classification.f1) << "\n"
       << "ranking key (accuracy, higher is better): " << format_metric(r.ranking_key) << "\n";
  } else {
    os << "task: regression (MMSE)\n"
       << "n: " << r.n << "\n"
       << "rmse: " << format_metric(r.regression.rmse) << "\n"
       << "pearson_r: " << format_metric(r.regression.pearson_r) << "\n"
       << "r_squared: " << format_metric(r.regression.r_squared) << "\n"
       << "ranking key (rmse, lower is better): " << format_metric(r.ranking_key) << "\n";
  }
  return os.str();
}

std::string report_csv(const SubmissionReport& r) {
  std::ostringstream os;
  os << "metric,value\n";
  if (r.task == Task::kClassification) {
    os << "task,classification\npositive_class,AD\nn," << r.n << "\n"
       << "tp," << r.confusion.tp << "\nfp," << r.confusion.fp << "\ntn," << r.confusion.tn
       << "\nfn," << r.confusion.fn << "\n"
       << "accuracy," << format_metric(r.classification.accuracy) << "\n"
       << "sensitivity," << format_metric(r.classification.sensitivity) << "\n"
       << "specificity," << format_metric(r.classification.specificity) << "\n"
       << "precision," << format_metric(r.classification.precision) << "\n"
       << "f1," << format_metric(r.classification.f1) << "\n";
  } else {
    os << "task,regression\nn," << r.n << "\n"
       << "rmse," << format_metric(r.regression.rmse) << "\n"
       << "pearson_r," << format_metric(r.regression.pearson_r) << "\n"
       << "r_squared," << format_metric(r.regression.r_squared) << "\n";
  }
  return os.str();
}

}  // namespace adress::eval
