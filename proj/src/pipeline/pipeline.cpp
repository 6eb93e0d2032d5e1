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

#include "adress/pipeline/pipeline.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <sstream>
#include <utility>

#include "adress/audio/wav.hpp"
#include "adress/common/parallel.hpp"
#include "adress/common/seed.hpp"
#include "adress/features/feature_table.hpp"
#include "adress/pipeline/csv.hpp"
#include "json.hpp"

namespace adress::pipeline {

namespace fs = std::filesystem;

namespace {

// Runs fn and prefixes any adress::Error with the stage and recording.
template <typename Fn>
auto in_stage(std::string_view stage, const std::string& id, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    std::string where = "stage " + std::string(stage);
    if (!id.empty()) where += ", recording " + id;
    throw_error(e.category(), where + ": " + e.what());
  }
}

void say(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

// Only the settings that change frame features invalidate the cache.
std::uint64_t feature_settings_hash(const PipelineConfig& config) {
  std::istringstream in(format_config(config));
  std::string line;
  std::string relevant(features::kFeatureTableVersion);
  while (std::getline(in, line)) {
    if (line.rfind("loudness.", 0) == 0 || line.rfind("features.", 0) == 0) relevant += line + '\n';
  }
  return fnv1a64(relevant);
}

std::uint64_t cache_key(const audio::Recording& rec, std::uint64_t settings) {
  const std::string_view bytes(reinterpret_cast<const char*>(rec.samples.data()),
                               rec.samples.size() * sizeof(double));
  std::uint64_t h = fnv1a64(bytes);
  h = splitmix64(h ^ static_cast<std::uint64_t>(rec.sample_rate));
  return splitmix64(h ^ settings);
}

std::string cache_name(const std::string& id) {
  // Ids are free text; keep the file name portable and collision-free.
  std::string safe;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    safe += ok ? c : '_';
  }
  char suffix[24];
  std::snprintf(suffix, sizeof suffix, "-%08" PRIx64, static_cast<std::uint64_t>(fnv1a64(id) & 0xffffffffU));
  return safe + suffix + ".feat";
}

std::vector<features::FrameFeatureMatrix> matrices(const std::vector<RecordingFeatures>& recs) {
  std::vector<features::FrameFeatureMatrix> out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.push_back(r.matrix);
  return out;
}

std::vector<std::vector<double>> represent_all(const adr::AdrModel& model,
                                               const std::vector<RecordingFeatures>& recs,
                                               int threads) {
  std::vector<std::vector<double>> x(recs.size());
  parallel_for(recs.size(), threads, [&](std::size_t i) {
    const auto& r = recs[i];
    x[i] = in_stage("adr", r.entry.id, [&] {
      return adr::represent_recording(model, r.matrix, r.entry.age, r.entry.gender_code())
          .features();
    });
  });
  return x;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view task_name(eval::Task task) {
  return task == eval::Task::kClassification ? "classification" : "regression";
}

std::optional<eval::Task> parse_task(std::string_view s) {
  if (s == "1" || s == "classification") return eval::Task::kClassification;
  if (s == "2" || s == "regression") return eval::Task::kRegression;
  return std::nullopt;
}

std::vector<RecordingFeatures> extract_corpus(const Manifest& manifest, const PipelineConfig& config,
                                              const std::optional<fs::path>& cache_dir,
                                              const Logger& log) {
  if (cache_dir) fs::create_directories(*cache_dir);
  const std::uint64_t settings = feature_settings_hash(config);
  std::vector<RecordingFeatures> out(manifest.size());
  std::atomic<std::size_t> hits{0};
  parallel_for(manifest.size(), config.threads, [&](std::size_t i) {
    const ManifestEntry& e = manifest[i];
    RecordingFeatures& r = out[i];
    r.entry = e;
    audio::Recording rec = in_stage("load", e.id, [&] { return audio::load_audio(e.audio_path); });
    rec.id = e.id;
    const std::uint64_t key = cache_key(rec, settings);
    auto normalized =
        in_stage("normalize", e.id, [&] { return audio::normalize_loudness(rec, config.loudness); });
    r.loudness = normalized.report;
    const fs::path cached = cache_dir ? *cache_dir / cache_name(e.id) : fs::path();
    if (cache_dir) {
      if (auto m = in_stage("extract", e.id, [&] { return load_feature_cache(cached, key); })) {
        r.matrix = std::move(*m);
        r.matrix.recording_id = e.id;
        ++hits;
        return;
      }
    }
    r.matrix = in_stage("extract", e.id, [&] {
      return features::extract_frame_features(normalized.recording, config.features);
    });
    if (cache_dir) save_feature_cache(cached, r.matrix, key);
  });
  say(log, "extract: " + std::to_string(manifest.size()) + " recordings, " +
               std::to_string(hits.load()) + " from cache");
  return out;
}

adr::SomOptions som_options(const PipelineConfig& config, int node_count) {
  adr::SomOptions o;
  o.node_count = node_count;
  o.epochs = config.adr_epochs;
  o.seed = derive_stage_seed(config.seed, kStageSom);
  return o;
}

TaskModel train_task(const std::vector<RecordingFeatures>& train, eval::Task task,
                     const PipelineConfig& config, int node_count) {
  TaskModel model;
  model.task = task;
  model.adr = in_stage("adr", "", [&] {
    return adr::fit_adr(matrices(train), som_options(config, node_count), config.adr_duration_stats);
  });
  const auto x = represent_all(model.adr, train, config.threads);
  if (task == eval::Task::kClassification) {
    std::vector<Group> y;
    for (const auto& r : train) {
      if (!r.entry.group) throw DataError("stage train, recording " + r.entry.id + ": missing group label");
      y.push_back(*r.entry.group);
    }
    model.nb = in_stage("train", "", [&] { return models::train_nb(x, y); });
  } else {
    std::vector<double> y;
    for (const auto& r : train) {
      if (!r.entry.mmse) throw DataError("stage train, recording " + r.entry.id + ": missing MMSE");
      y.push_back(*r.entry.mmse);
    }
    model.svr = in_stage("train", "", [&] { return models::train_svr(x, y, config.svr); });
  }
  return model;
}

std::vector<Prediction> predict_task(const TaskModel& model,
                                     const std::vector<RecordingFeatures>& recordings, int threads) {
  const auto x = represent_all(model.adr, recordings, threads);
  std::vector<Prediction> out(recordings.size());
  for (std::size_t i = 0; i < recordings.size(); ++i) {
    Prediction& p = out[i];
    p.id = recordings[i].entry.id;
    in_stage("predict", p.id, [&] {
      if (model.task == eval::Task::kClassification) {
        const auto nb = models::predict_nb(*model.nb, x[i]);
        p.label = nb.label;
        p.posterior = nb.posterior;
      } else {
        p.mmse = models::predict_svr(*model.svr, x[i]);
      }
    });
  }
  return out;
}

std::string predictions_csv(const std::vector<Prediction>& predictions, eval::Task task) {
  std::ostringstream os;
  if (task == eval::Task::kClassification) {
    write_csv_row(os, {"id", "label", "posterior_ad"});
    for (const auto& p : predictions) {
      write_csv_row(os, {p.id, std::string(to_string(p.label)),
                         format_double(p.posterior[static_cast<int>(Group::kAD)])});
    }
  } else {
    write_csv_row(os, {"id", "mmse"});
    for (const auto& p : predictions) write_csv_row(os, {p.id, format_double(p.mmse)});
  }
  return os.str();
}

std::vector<std::pair<std::string, std::string>> read_predictions(const fs::path& path,
                                                                  eval::Task task) {
  const CsvTable t = read_csv(path);
  const int id = t.column("id");
  const int value = t.column(task == eval::Task::kClassification ? "label" : "mmse");
  if (id < 0 || value < 0) {
    throw DataError(path.string() + ": predictions need columns id and " +
                    (task == eval::Task::kClassification ? "label" : "mmse"));
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& row : t.rows) out.emplace_back(row[id], row[value]);
  return out;
}

models::GridSearchResult grid_search_task(const std::vector<RecordingFeatures>& train,
                                          eval::Task task, const PipelineConfig& config) {
  // Stratify on the class label when every training recording has one.
  std::vector<int> strata(train.size(), 0);
  bool labelled = true;
  for (const auto& r : train) labelled = labelled && r.entry.group.has_value();
  if (labelled) {
    for (std::size_t i = 0; i < train.size(); ++i) strata[i] = static_cast<int>(*train[i].entry.group);
  }
  const std::vector<int> fold =
      models::stratified_folds(strata, config.grid_folds, derive_stage_seed(config.seed, kStageFolds));

  PipelineConfig inner = config;
  inner.threads = 1;  // candidates already run concurrently
  auto evaluate = [&](int c) {
    std::vector<Prediction> pooled(train.size());
    for (int k = 0; k < config.grid_folds; ++k) {
      std::vector<RecordingFeatures> fit;
      std::vector<RecordingFeatures> held;
      std::vector<std::size_t> held_index;
      for (std::size_t i = 0; i < train.size(); ++i) {
        if (fold[i] == k) {
          held.push_back(train[i]);
          held_index.push_back(i);
        } else {
          fit.push_back(train[i]);
        }
      }
      if (held.empty()) continue;
      const TaskModel m = train_task(fit, task, inner, c);
      const auto p = predict_task(m, held, 1);
      for (std::size_t j = 0; j < p.size(); ++j) pooled[held_index[j]] = p[j];
    }
    if (task == eval::Task::kClassification) {
      std::size_t correct = 0;
      for (std::size_t i = 0; i < train.size(); ++i) correct += pooled[i].label == *train[i].entry.group;
      return static_cast<double>(correct) / static_cast<double>(train.size());
    }
    std::vector<double> pred;
    std::vector<double> truth;
    for (std::size_t i = 0; i < train.size(); ++i) {
      pred.push_back(pooled[i].mmse);
      truth.push_back(*train[i].entry.mmse);
    }
    return eval::regression_metrics(pred, truth).rmse;
  };
  return models::grid_search(config.grid_candidates,
                             task == eval::Task::kClassification ? models::Objective::kAccuracy
                                                                 : models::Objective::kRmse,
                             evaluate);
}

RunSummary run_pipeline(const PipelineConfig& config, const Manifest& train, const Manifest& test,
                        const RunOptions& options) {
  if (options.out_dir.empty()) throw UsageError("run_pipeline: output directory not set");
  if (train.empty() || test.empty()) throw DataError("run_pipeline: empty train or test manifest");
  fs::create_directories(options.out_dir);
  RunSummary summary;
  summary.run_dir = options.out_dir;
  summary.config_hash = config_hash(config);
  write_text_file(options.out_dir / "config.txt", format_config(config));
  write_manifest(options.out_dir / "train_manifest.csv", train);

  const fs::path cache = options.out_dir / "features";
  say(options.log, "extract: train");
  const auto train_features = extract_corpus(train, config, cache, options.log);
  // The test side only ever sees the unlabelled manifest.
  say(options.log, "extract: test (labels removed)");
  const auto test_features = extract_corpus(strip_labels(test), config, cache, options.log);

  nlohmann::json tasks_json = nlohmann::json::array();
  for (eval::Task task : options.tasks) {
    TaskOutcome outcome;
    outcome.task = task;
    outcome.directory = options.out_dir / ("task" + std::to_string(static_cast<int>(task)));
    fs::create_directories(outcome.directory);
    const std::string name(task_name(task));

    if (options.grid_search) {
      say(options.log, name + ": grid search");
      outcome.grid = in_stage("grid-search", "", [&] { return grid_search_task(train_features, task, config); });
      outcome.node_count = outcome.grid->chosen;
      std::ostringstream os;
      write_csv_row(os, {"C", std::string(models::to_string(outcome.grid->objective))});
      for (std::size_t i = 0; i < outcome.grid->candidates.size(); ++i) {
        write_csv_row(os, {std::to_string(outcome.grid->candidates[i]),
                           format_double(outcome.grid->scores[i])});
      }
      write_text_file(outcome.directory / "grid_search.csv", os.str());
    } else {
      outcome.node_count = task == eval::Task::kClassification ? config.adr_c_classification
                                                               : config.adr_c_regression;
    }

    say(options.log, name + ": train C=" + std::to_string(outcome.node_count));
    const TaskModel model = train_task(train_features, task, config, outcome.node_count);
    save_adr(outcome.directory / "adr.model", model.adr);
    save_model(outcome.directory / "learner.model", model);

    say(options.log, name + ": predict");
    outcome.predictions = predict_task(model, test_features, config.threads);
    const fs::path pred_path = outcome.directory / "predictions.csv";
    write_text_file(pred_path, predictions_csv(outcome.predictions, task));

    bool labelled = true;
    for (const auto& e : test) {
      labelled = labelled && (task == eval::Task::kClassification ? e.group.has_value() : e.mmse.has_value());
    }
    if (labelled) {
      // Scored from the file just written, exactly as `evaluate` would.
      outcome.report = in_stage("evaluate", "", [&] {
        return eval::score_submission(read_predictions(pred_path, task), references(test), task);
      });
      write_text_file(outcome.directory / "report.txt", eval::report_text(*outcome.report));
      write_text_file(outcome.directory / "report.csv", eval::report_csv(*outcome.report));
    }

    nlohmann::json tj = {{"task", static_cast<int>(task)},
                         {"name", name},
                         {"node_count", outcome.node_count},
                         {"grid_search", options.grid_search},
                         {"predictions", "task" + std::to_string(static_cast<int>(task)) + "/predictions.csv"},
                         {"scored", labelled}};
    tasks_json.push_back(tj);
    summary.tasks.push_back(std::move(outcome));
  }

  // Reference labels are stored only now, after every prediction is on disk.
  write_manifest(options.out_dir / "test_manifest.csv", test);

  nlohmann::json run = {
      {"config_hash", summary.config_hash},
      {"seed", config.seed},
      {"stage_seeds",
       {{kStageSom, derive_stage_seed(config.seed, kStageSom)},
        {kStageFolds, derive_stage_seed(config.seed, kStageFolds)}}},
      {"feature_table_version", std::string(features::kFeatureTableVersion)},
      {"train_count", train.size()},
      {"test_count", test.size()},
      {"tasks", tasks_json},
  };
  write_text_file(options.out_dir / "run.json", run.dump(2) + "\n");
  return summary;
}

}  // namespace adress::pipeline
