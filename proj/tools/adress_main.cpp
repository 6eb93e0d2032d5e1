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

// Command-line front end. Exit codes: 0 ok, 1 usage, 2 data, 3 numerical.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adress/audio/loudness.hpp"
#include "adress/audio/wav.hpp"
#include "adress/common/error.hpp"
#include "adress/common/seed.hpp"
#include "adress/eval/metrics.hpp"
#include "adress/matching/matching.hpp"
#include "adress/pipeline/config.hpp"
#include "adress/pipeline/csv.hpp"
#include "adress/pipeline/manifest.hpp"
#include "adress/pipeline/persistence.hpp"
#include "adress/pipeline/pipeline.hpp"
#include "adress/pipeline/synth.hpp"

namespace fs = std::filesystem;
using namespace adress;
using namespace adress::pipeline;

namespace {

pipeline::PipelineConfig load_config(const std::string& path) {
  return path.empty() ? PipelineConfig{} : read_config(path);
}

eval::Task task_arg(const std::string& s) {
  const auto t = parse_task(s);
  if (!t) throw UsageError("--task must be 1, 2, classification or regression (got '" + s + "')");
  return *t;
}

std::string fmt(double v, const char* spec = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Logger stderr_logger(bool verbose) {
  if (!verbose) return nullptr;
  return [](const std::string& m) { std::cerr << m << '\n'; };
}

std::string predictions_summary(const std::vector<Prediction>& p, eval::Task task) {
  std::size_t ad = 0;
  for (const auto& x : p) ad += x.label == Group::kAD;
  if (task == eval::Task::kClassification) {
    return std::to_string(p.size()) + " predictions (" + std::to_string(ad) + " AD)";
  }
  return std::to_string(p.size()) + " predictions";
}

// --- normalize -------------------------------------------------------------

struct NormalizeArgs {
  std::string in, out;
  double target = audio::kDefaultTargetLufs;
  bool no_clip = false;
};

int run_normalize(const NormalizeArgs& a) {
  const audio::Recording rec = audio::load_audio(a.in);
  audio::NormalizeOptions o;
  o.target_lufs = a.target;
  o.hard_clip = !a.no_clip;
  const auto n = audio::normalize_loudness(rec, o);
  audio::write_wav(a.out, n.recording);
  std::cout << "input " << fmt(n.report.integrated_lufs, "%.2f") << " LUFS, gain "
            << fmt(n.report.applied_gain_db.value_or(0.0), "%.2f") << " dB, clipped "
            << n.report.clip_count << " samples\n";
  return 0;
}

// --- extract ---------------------------------------------------------------

struct CorpusArgs {
  std::string manifest, config, cache;
  bool verbose = false;
};

std::vector<RecordingFeatures> corpus_features(const CorpusArgs& a, const PipelineConfig& config,
                                               bool strip) {
  Manifest m = read_manifest(a.manifest);
  if (strip) m = strip_labels(m);
  std::optional<fs::path> cache;
  if (!a.cache.empty()) cache = a.cache;
  return extract_corpus(m, config, cache, stderr_logger(a.verbose));
}

int run_extract(const CorpusArgs& a, const std::string& out) {
  const PipelineConfig config = load_config(a.config);
  const auto recs = corpus_features(a, config, true);
  std::string text = features_csv_header();
  std::size_t frames = 0;
  for (const auto& r : recs) {
    text += features_csv_rows(r.matrix);
    frames += r.matrix.rows.size();
  }
  write_text_file(out, text);
  std::cout << recs.size() << " recordings, " << frames << " frames -> " << out << '\n';
  return 0;
}

// --- adr fit | transform ---------------------------------------------------

int run_adr_fit(const std::string& features_csv, const std::string& config_path, int nodes,
                const std::string& out) {
  const PipelineConfig config = load_config(config_path);
  const auto mats = read_features_csv(features_csv);
  const auto model = adr::fit_adr(mats, som_options(config, nodes), config.adr_duration_stats);
  save_adr(out, model);
  std::cout << "C=" << model.node_count() << ", " << model.codebook.epochs
            << " epochs, quantization error " << fmt(model.codebook.quantization_error) << " -> "
            << out << '\n';
  return 0;
}

int run_adr_transform(const std::string& model_path, const std::string& features_csv,
                      const std::string& manifest_path, const std::string& out) {
  const adr::AdrModel model = load_adr(model_path);
  const auto mats = read_features_csv(features_csv);
  std::map<std::string, ManifestEntry> by_id;
  for (const auto& e : read_manifest(manifest_path)) by_id.emplace(e.id, e);

  std::ostringstream os;
  std::vector<std::string> header{"id"};
  for (std::size_t j = 0; j + 2 < model.output_dimension(); ++j) header.push_back("adr_" + std::to_string(j));
  header.push_back("age");
  header.push_back("gender");
  write_csv_row(os, header);
  for (const auto& m : mats) {
    auto it = by_id.find(m.recording_id);
    if (it == by_id.end()) throw DataError("recording " + m.recording_id + " not in manifest");
    const auto v = adr::represent_recording(model, m, it->second.age, it->second.gender_code());
    std::vector<std::string> row{m.recording_id};
    for (double x : v.features()) row.push_back(fmt(x, "%.17g"));
    write_csv_row(os, row);
  }
  write_text_file(out, os.str());
  std::cout << mats.size() << " recordings -> " << out << '\n';
  return 0;
}

// --- train / predict -------------------------------------------------------

int run_train(const CorpusArgs& a, const std::string& task_s, int nodes, const std::string& out) {
  const PipelineConfig config = load_config(a.config);
  const eval::Task task = task_arg(task_s);
  if (nodes <= 0) {
    nodes = task == eval::Task::kClassification ? config.adr_c_classification : config.adr_c_regression;
  }
  const auto recs = corpus_features(a, config, false);
  const TaskModel model = train_task(recs, task, config, nodes);
  save_model(out, model);
  std::cout << task_name(task) << " model, C=" << nodes << ", " << recs.size()
            << " recordings -> " << out << '\n';
  return 0;
}

int run_predict(const CorpusArgs& a, const std::string& model_path, const std::string& out) {
  const PipelineConfig config = load_config(a.config);
  const TaskModel model = load_model(model_path);
  const auto recs = corpus_features(a, config, true);
  const auto p = predict_task(model, recs, config.threads);
  write_text_file(out, predictions_csv(p, model.task));
  std::cout << predictions_summary(p, model.task) << " -> " << out << '\n';
  return 0;
}

// --- grid-search -----------------------------------------------------------

int run_grid(const CorpusArgs& a, const std::string& task_s, const std::string& out) {
  const PipelineConfig config = load_config(a.config);
  const eval::Task task = task_arg(task_s);
  const auto recs = corpus_features(a, config, false);
  const auto g = grid_search_task(recs, task, config);
  std::ostringstream os;
  write_csv_row(os, {"C", std::string(models::to_string(g.objective))});
  for (std::size_t i = 0; i < g.candidates.size(); ++i) {
    write_csv_row(os, {std::to_string(g.candidates[i]), fmt(g.scores[i], "%.17g")});
    std::cout << "C=" << g.candidates[i] << "  " << models::to_string(g.objective) << " "
              << fmt(g.scores[i]) << '\n';
  }
  std::cout << "chosen C=" << g.chosen << '\n';
  if (!out.empty()) write_text_file(out, os.str());
  return 0;
}

// --- match -----------------------------------------------------------------

std::vector<matching::CohortMember> read_cohort(const std::string& path) {
  const CsvTable t = read_csv(path);
  const int id = t.column("id"), age = t.column("age"), gender = t.column("gender"),
            group = t.column("group");
  if (id < 0 || age < 0 || gender < 0 || group < 0) {
    throw DataError(path + ": cohort needs columns id, age, gender, group");
  }
  std::vector<matching::CohortMember> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = path + ":" + std::to_string(t.lines[r]) + ": ";
    matching::CohortMember m;
    m.id = row[id];
    try {
      std::size_t used = 0;
      m.age = std::stod(row[age], &used);
      if (used != row[age].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(where + "bad age '" + row[age] + "'");
    }
    if (row[gender] == "M") {
      m.gender = 0;
    } else if (row[gender] == "F") {
      m.gender = 1;
    } else {
      throw DataError(where + "gender must be M or F");
    }
    const auto g = parse_group(row[group]);
    if (!g) throw DataError(where + "group must be CN or AD");
    m.treated = *g == Group::kAD;
    out.push_back(m);
  }
  return out;
}

std::string balance_text(const matching::BalanceReport& b) {
  std::ostringstream os;
  for (const auto& e : b.entries) {
    os << "  " << e.term << std::string(12 - e.term.size(), ' ') << fmt(e.smd) << "  (< "
       << fmt(e.threshold, "%.2f") << ") " << (e.pass ? "ok" : "FAIL") << '\n';
  }
  return os.str();
}

int run_match(const std::string& cohort, const std::string& config_path, const std::string& out_dir) {
  const PipelineConfig config = load_config(config_path);
  const auto members = read_cohort(cohort);
  const auto ps = matching::propensity_scores(members);
  matching::MatchOptions o;
  o.caliper_sd = config.matching_caliper_sd;
  o.seed = derive_stage_seed(config.seed, kStageMatching);
  const auto result = matching::match_pairs(members, ps.scores, o);
  const auto matched = result.subset(members);
  const auto before = matching::balance_report(members);
  const auto after = matching::balance_report(matched);

  std::cout << "before matching (" << members.size() << " members):\n" << balance_text(before);
  std::cout << "after matching (" << result.pairs.size() << " pairs, caliper " << fmt(result.caliper)
            << ", " << result.unmatched_treated << " treated unmatched):\n"
            << balance_text(after);
  std::cout << (after.all_pass ? "balanced\n" : "NOT balanced\n");

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ostringstream m;
    write_csv_row(m, {"pair", "id", "group", "age", "gender", "propensity"});
    for (std::size_t k = 0; k < result.pairs.size(); ++k) {
      for (std::size_t idx : {result.pairs[k].treated, result.pairs[k].control}) {
        const auto& c = members[idx];
        write_csv_row(m, {std::to_string(k), c.id, c.treated ? "AD" : "CN", fmt(c.age, "%g"),
                          c.gender ? "F" : "M", fmt(ps.scores[idx], "%.6f")});
      }
    }
    write_text_file(fs::path(out_dir) / "matched.csv", m.str());
    std::ostringstream b;
    write_csv_row(b, {"stage", "term", "smd", "threshold", "pass"});
    for (const auto& [stage, rep] : {std::pair{"before", &before}, std::pair{"after", &after}}) {
      for (const auto& e : rep->entries) {
        write_csv_row(b, {stage, e.term, fmt(e.smd, "%.6f"), fmt(e.threshold, "%.2f"),
                          e.pass ? "true" : "false"});
      }
    }
    write_text_file(fs::path(out_dir) / "balance.csv", b.str());
  }
  return after.all_pass ? 0 : 2;
}

// --- evaluate --------------------------------------------------------------

int run_evaluate(const std::string& predictions, const std::string& reference,
                 const std::string& task_s, const std::string& out_dir) {
  const eval::Task task = task_arg(task_s);
  const auto report = eval::score_submission(read_predictions(predictions, task),
                                             references(read_manifest(reference)), task);
  std::cout << eval::report_text(report);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text_file(fs::path(out_dir) / "report.txt", eval::report_text(report));
    write_text_file(fs::path(out_dir) / "report.csv", eval::report_csv(report));
  }
  return 0;
}

// --- pipeline run ----------------------------------------------------------

int run_pipeline_cmd(const std::string& config_path, const std::string& train,
                     const std::string& test, const std::string& out, const std::string& task_s,
                     bool grid, bool verbose) {
  const PipelineConfig config = load_config(config_path);
  RunOptions o;
  o.out_dir = out;
  o.grid_search = grid;
  o.log = stderr_logger(verbose);
  if (task_s != "both") o.tasks = {task_arg(task_s)};
  const auto summary = run_pipeline(config, read_manifest(train), read_manifest(test), o);
  std::cout << "run " << summary.run_dir.string() << " (config " << summary.config_hash << ")\n";
  for (const auto& t : summary.tasks) {
    std::cout << "task " << static_cast<int>(t.task) << " " << task_name(t.task)
              << ": C=" << t.node_count << ", " << predictions_summary(t.predictions, t.task) << '\n';
    if (t.report) std::cout << eval::report_text(*t.report);
  }
  return 0;
}

// --- synth -----------------------------------------------------------------

int run_synth(const std::string& out, int per_class, double seconds, std::uint64_t seed,
              const std::string& prefix, bool null_case) {
  SynthSpec spec;
  spec.per_class = per_class;
  spec.seconds = seconds;
  spec.id_prefix = prefix;
  if (null_case) spec.ad = spec.cn;
  const Manifest m = generate_synthetic_corpus(spec, seed, out);
  std::cout << m.size() << " recordings -> " << (fs::path(out) / "manifest.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic dementia-detection baseline: loudness normalization, frame features, "
               "active data representation, NB/SVR learners, matching and evaluation."};
  bool print_config = false;
  app.add_flag("--print-default-config", print_config, "Print the default configuration and exit");
  app.require_subcommand(0, 1);

  NormalizeArgs na;
  auto* normalize = app.add_subcommand("normalize", "Loudness-normalize one WAV file");
  normalize->add_option("input", na.in, "Input WAV")->required();
  normalize->add_option("output", na.out, "Output WAV (32-bit float)")->required();
  normalize->add_option("--target", na.target, "Target integrated loudness (LUFS)");
  normalize->add_flag("--no-clip", na.no_clip, "Do not clamp samples to [-1, 1]");

  auto corpus_options = [](CLI::App* sub, CorpusArgs& a) {
    sub->add_option("--manifest,-m", a.manifest, "Manifest CSV")->required();
    sub->add_option("--config,-c", a.config, "Config file (defaults when omitted)");
    sub->add_option("--cache", a.cache, "Feature cache directory");
    sub->add_flag("--verbose,-v", a.verbose, "Progress on stderr");
  };

  CorpusArgs ea;
  std::string extract_out;
  auto* extract = app.add_subcommand("extract", "Frame-level features for a manifest, as CSV");
  corpus_options(extract, ea);
  extract->add_option("--out,-o", extract_out, "Features CSV")->required();

  auto* adr_cmd = app.add_subcommand("adr", "Active data representation");
  adr_cmd->require_subcommand(1);
  std::string af_features, af_config, af_out;
  int af_nodes = 15;
  auto* adr_fit = adr_cmd->add_subcommand("fit", "Fit standardizer and SOM on a features CSV");
  adr_fit->add_option("--features,-f", af_features, "Features CSV")->required();
  adr_fit->add_option("--config,-c", af_config, "Config file (epochs, seed)");
  adr_fit->add_option("--nodes,-C", af_nodes, "SOM size C")->check(CLI::PositiveNumber);
  adr_fit->add_option("--out,-o", af_out, "ADR model file")->required();
  std::string at_model, at_features, at_manifest, at_out;
  auto* adr_transform = adr_cmd->add_subcommand("transform", "Per-recording ADR vectors as CSV");
  adr_transform->add_option("--model", at_model, "ADR model file")->required();
  adr_transform->add_option("--features,-f", at_features, "Features CSV")->required();
  adr_transform->add_option("--manifest,-m", at_manifest, "Manifest (age, gender)")->required();
  adr_transform->add_option("--out,-o", at_out, "Output CSV")->required();

  CorpusArgs ta;
  std::string train_task_s = "1", train_out;
  int train_nodes = 0;
  auto* train = app.add_subcommand("train", "Extract, fit ADR and train the task learner");
  corpus_options(train, ta);
  train->add_option("--task,-t", train_task_s, "1/classification or 2/regression");
  train->add_option("--nodes,-C", train_nodes, "SOM size (config default when omitted)");
  train->add_option("--out,-o", train_out, "Model file")->required();

  CorpusArgs pa;
  std::string predict_model, predict_out;
  auto* predict = app.add_subcommand("predict", "Predict for a manifest (labels are ignored)");
  corpus_options(predict, pa);
  predict->add_option("--model", predict_model, "Model file from train")->required();
  predict->add_option("--out,-o", predict_out, "Predictions CSV")->required();

  CorpusArgs ga;
  std::string grid_task_s = "1", grid_out;
  auto* grid = app.add_subcommand("grid-search", "Cross-validated choice of the SOM size");
  corpus_options(grid, ga);
  grid->add_option("--task,-t", grid_task_s, "1/classification or 2/regression");
  grid->add_option("--out,-o", grid_out, "Scores CSV");

  std::string match_cohort, match_config, match_out;
  auto* match = app.add_subcommand("match", "Propensity-score matching of a cohort (id,age,gender,group)");
  match->add_option("cohort", match_cohort, "Cohort CSV")->required();
  match->add_option("--config,-c", match_config, "Config file (seed, caliper)");
  match->add_option("--out-dir,-o", match_out, "Write matched.csv and balance.csv here");

  std::string ev_pred, ev_ref, ev_task = "1", ev_out;
  auto* evaluate = app.add_subcommand("evaluate", "Score a predictions file against a manifest");
  evaluate->add_option("--predictions,-p", ev_pred, "Predictions CSV")->required();
  evaluate->add_option("--reference,-r", ev_ref, "Labelled manifest")->required();
  evaluate->add_option("--task,-t", ev_task, "1/classification or 2/regression");
  evaluate->add_option("--out-dir,-o", ev_out, "Write report.txt and report.csv here");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "End-to-end runs");
  pipeline_cmd->require_subcommand(1);
  std::string pr_config, pr_train, pr_test, pr_out, pr_task = "both";
  bool pr_grid = false, pr_verbose = false;
  auto* prun = pipeline_cmd->add_subcommand("run", "normalize -> extract -> adr -> train/predict -> evaluate");
  prun->add_option("--config,-c", pr_config, "Config file (defaults when omitted)");
  prun->add_option("--train", pr_train, "Training manifest")->required();
  prun->add_option("--test", pr_test, "Test manifest")->required();
  prun->add_option("--out,-o", pr_out, "Run directory")->required();
  prun->add_option("--task,-t", pr_task, "1, 2 or both");
  prun->add_flag("--grid-search", pr_grid, "Choose C by cross-validation instead of the config");
  prun->add_flag("--verbose,-v", pr_verbose, "Progress on stderr");

  std::string sy_out, sy_prefix = "syn";
  int sy_per_class = 10;
  double sy_seconds = 20.0;
  std::uint64_t sy_seed = 1;
  bool sy_null = false;
  auto* synth = app.add_subcommand("synth", "Generate a labelled synthetic corpus");
  synth->add_option("--out,-o", sy_out, "Output directory")->required();
  synth->add_option("--per-class,-n", sy_per_class, "Recordings per group")->check(CLI::Range(2, 100000));
  synth->add_option("--seconds", sy_seconds, "Duration of each recording")->check(CLI::PositiveNumber);
  synth->add_option("--seed", sy_seed, "Generator seed");
  synth->add_option("--prefix", sy_prefix, "Recording id prefix");
  synth->add_flag("--null", sy_null, "Both groups share the control parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (print_config) {
      std::cout << format_config(PipelineConfig{});
      return 0;
    }
    if (*normalize) return run_normalize(na);
    if (*extract) return run_extract(ea, extract_out);
    if (*adr_fit) return run_adr_fit(af_features, af_config, af_nodes, af_out);
    if (*adr_transform) return run_adr_transform(at_model, at_features, at_manifest, at_out);
    if (*train) return run_train(ta, train_task_s, train_nodes, train_out);
    if (*predict) return run_predict(pa, predict_model, predict_out);
    if (*grid) return run_grid(ga, grid_task_s, grid_out);
    if (*match) return run_match(match_cohort, match_config, match_out);
    if (*evaluate) return run_evaluate(ev_pred, ev_ref, ev_task, ev_out);
    if (*prun) return run_pipeline_cmd(pr_config, pr_train, pr_test, pr_out, pr_task, pr_grid, pr_verbose);
    if (*synth) return run_synth(sy_out, sy_per_class, sy_seconds, sy_seed, sy_prefix, sy_null);
    std::cerr << app.help();
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
