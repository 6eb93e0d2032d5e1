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

#include "adress/pipeline/persistence.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "adress/common/error.hpp"
#include "adress/features/feature_table.hpp"
#include "adress/pipeline/csv.hpp"
#include "json.hpp"

namespace adress::pipeline {

using nlohmann::json;

namespace {

json matrix_json(const adr::Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(m.row(i).data(), m.row(i).data() + m.cols());
    rows.push_back(r);
  }
  return rows;
}

adr::Matrix matrix_from(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  adr::Matrix m(static_cast<Eigen::Index>(rows.size()),
                rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != m.cols()) throw DataError("ragged matrix in model file");
    for (std::size_t k = 0; k < rows[i].size(); ++k) m(i, k) = rows[i][k];
  }
  return m;
}

std::vector<double> vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd eig(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json adr_json(const adr::AdrModel& m) {
  json j;
  j["feature_table_version"] = m.feature_table_version;
  j["duration_stats"] = m.duration_stats;
  j["stats"] = {{"mean", vec(m.stats.mean)},
                {"stddev", vec(m.stats.stddev)},
                {"zero_variance", m.stats.zero_variance}};
  j["som"] = {{"node_count", m.codebook.node_count()},
              {"epochs", m.codebook.epochs},
              {"seed", m.codebook.seed},
              {"quantization_error", m.codebook.quantization_error},
              {"initial_quantization_error", m.codebook.initial_quantization_error},
              {"epoch_quantization_error", m.codebook.epoch_quantization_error},
              {"weights", matrix_json(m.codebook.weights)}};
  return j;
}

adr::AdrModel adr_from(const json& j) {
  adr::AdrModel m;
  m.feature_table_version = j.at("feature_table_version").get<std::string>();
  if (m.feature_table_version != features::kFeatureTableVersion) {
    throw DataError("model was built with feature table '" + m.feature_table_version +
                    "', this build uses '" + std::string(features::kFeatureTableVersion) + "'");
  }
  m.duration_stats = j.at("duration_stats").get<bool>();
  const json& s = j.at("stats");
  m.stats.mean = eig(s.at("mean").get<std::vector<double>>());
  m.stats.stddev = eig(s.at("stddev").get<std::vector<double>>());
  m.stats.zero_variance = s.at("zero_variance").get<std::vector<bool>>();
  const json& som = j.at("som");
  m.codebook.epochs = som.at("epochs").get<int>();
  m.codebook.seed = som.at("seed").get<std::uint64_t>();
  m.codebook.quantization_error = som.at("quantization_error").get<double>();
  m.codebook.initial_quantization_error = som.at("initial_quantization_error").get<double>();
  m.codebook.epoch_quantization_error = som.at("epoch_quantization_error").get<std::vector<double>>();
  m.codebook.weights = matrix_from(som.at("weights"));
  if (m.codebook.node_count() != som.at("node_count").get<std::size_t>() ||
      m.codebook.dimension() != m.stats.dimension() ||
      m.stats.stddev.size() != m.stats.mean.size()) {
    throw DataError("inconsistent ADR dimensions in model file");
  }
  return m;
}

json nb_json(const models::KdeNaiveBayesModel& m) {
  return {{"dimension", m.dimension},
          {"priors", m.priors},
          {"samples", m.samples},
          {"bandwidths", m.bandwidths}};
}

models::KdeNaiveBayesModel nb_from(const json& j) {
  models::KdeNaiveBayesModel m;
  m.dimension = j.at("dimension").get<std::size_t>();
  m.priors = j.at("priors").get<std::array<double, 2>>();
  m.samples = j.at("samples").get<std::array<std::vector<std::vector<double>>, 2>>();
  m.bandwidths = j.at("bandwidths").get<std::array<std::vector<double>, 2>>();
  for (std::size_t c = 0; c < 2; ++c) {
    if (m.samples[c].size() != m.dimension || m.bandwidths[c].size() != m.dimension) {
      throw DataError("inconsistent naive Bayes dimensions in model file");
    }
  }
  return m;
}

json svr_json(const models::SvrModel& m) {
  return {{"input_mean", m.input_mean},
          {"input_scale", m.input_scale},
          {"support_vectors", m.support_vectors},
          {"support_indices", m.support_indices},
          {"coefficients", m.coefficients},
          {"bias", m.bias},
          {"gamma", m.gamma},
          {"epsilon", m.epsilon},
          {"box", m.box},
          {"converged", m.converged},
          {"iterations", m.iterations},
          {"kkt_gap", m.kkt_gap},
          {"dual_objective", m.dual_objective},
          {"coefficient_sum", m.coefficient_sum}};
}

models::SvrModel svr_from(const json& j) {
  models::SvrModel m;
  m.input_mean = j.at("input_mean").get<std::vector<double>>();
  m.input_scale = j.at("input_scale").get<std::vector<double>>();
  m.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
  m.support_indices = j.at("support_indices").get<std::vector<std::size_t>>();
  m.coefficients = j.at("coefficients").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.gamma = j.at("gamma").get<double>();
  m.epsilon = j.at("epsilon").get<double>();
  m.box = j.at("box").get<double>();
  m.converged = j.at("converged").get<bool>();
  m.iterations = j.at("iterations").get<long>();
  m.kkt_gap = j.at("kkt_gap").get<double>();
  m.dual_objective = j.at("dual_objective").get<double>();
  m.coefficient_sum = j.at("coefficient_sum").get<double>();
  if (m.coefficients.size() != m.support_vectors.size() ||
      m.input_scale.size() != m.input_mean.size()) {
    throw DataError("inconsistent SVR dimensions in model file");
  }
  return m;
}

void write_tagged(const std::filesystem::path& path, const char* magic, const json& j) {
  write_text_file(path, std::string(magic) + " " + std::to_string(kModelSchemaVersion) + "\n" +
                            j.dump(1) + "\n");
}

json read_tagged(const std::filesystem::path& path, const char* magic) {
  const std::string text = read_text_file(path);
  const auto nl = text.find('\n');
  const std::string first = text.substr(0, nl);
  const std::string expected = std::string(magic) + " ";
  if (first.rfind(expected, 0) != 0) {
    throw DataError(path.string() + ": not a " + magic + " file");
  }
  if (first.substr(expected.size()) != std::to_string(kModelSchemaVersion)) {
    throw DataError(path.string() + ": unsupported schema version '" + first.substr(expected.size()) + "'");
  }
  try {
    return json::parse(text.substr(nl + 1));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": malformed model payload: " + e.what());
  }
}

template <typename F>
auto guarded(const std::filesystem::path& path, F f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": malformed model payload: " + e.what());
  }
}

// Little-endian binary helpers.
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
void put_str(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

class Reader {
 public:
  Reader(const std::string& data, std::string source) : d_(data), source_(std::move(source)) {}
  std::uint64_t u(int bytes) {
    need(bytes);
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= std::uint64_t(static_cast<unsigned char>(d_[pos_ + i])) << (8 * i);
    pos_ += bytes;
    return v;
  }
  double f64() { return std::bit_cast<double>(u(8)); }
  std::string str() {
    const auto n = static_cast<std::size_t>(u(4));
    need(n);
    std::string s = d_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == d_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > d_.size()) throw DataError(source_ + ": truncated feature cache");
  }
  const std::string& d_;
  std::string source_;
  std::size_t pos_ = 0;
};

constexpr char kCacheMagic[8] = {'A', 'D', 'R', 'F', 'E', 'A', 'T', '\0'};

}  // namespace

void save_adr(const std::filesystem::path& path, const adr::AdrModel& model) {
  write_tagged(path, kAdrMagic, adr_json(model));
}

adr::AdrModel load_adr(const std::filesystem::path& path) {
  const json j = read_tagged(path, kAdrMagic);
  return guarded(path, [&] { return adr_from(j); });
}

void save_model(const std::filesystem::path& path, const TaskModel& model) {
  json j;
  j["task"] = model.task == eval::Task::kClassification ? "classification" : "regression";
  j["adr"] = adr_json(model.adr);
  if (model.nb) j["learner"] = {{"type", "kde_naive_bayes"}, {"model", nb_json(*model.nb)}};
  if (model.svr) j["learner"] = {{"type", "rbf_svr_smo"}, {"model", svr_json(*model.svr)}};
  write_tagged(path, kModelMagic, j);
}

TaskModel load_model(const std::filesystem::path& path) {
  const json j = read_tagged(path, kModelMagic);
  return guarded(path, [&] {
    TaskModel m;
    const auto task = j.at("task").get<std::string>();
    const auto type = j.at("learner").at("type").get<std::string>();
    m.adr = adr_from(j.at("adr"));
    if (task == "classification" && type == "kde_naive_bayes") {
      m.task = eval::Task::kClassification;
      m.nb = nb_from(j.at("learner").at("model"));
      if (m.nb->dimension != m.adr.output_dimension()) throw DataError("learner/ADR dimension mismatch");
    } else if (task == "regression" && type == "rbf_svr_smo") {
      m.task = eval::Task::kRegression;
      m.svr = svr_from(j.at("learner").at("model"));
      if (m.svr->dimension() != m.adr.output_dimension()) throw DataError("learner/ADR dimension mismatch");
    } else {
      throw DataError(path.string() + ": unknown task/learner '" + task + "/" + type + "'");
    }
    return m;
  });
}

void save_feature_cache(const std::filesystem::path& path,
                        const features::FrameFeatureMatrix& matrix, std::uint64_t key) {
  std::string out(kCacheMagic, sizeof kCacheMagic);
  out.push_back(static_cast<char>(kFeatureCacheVersion));
  put_u64(out, key);
  put_str(out, std::string(features::kFeatureTableVersion));
  put_str(out, matrix.recording_id);
  out.push_back(matrix.short_recording ? 1 : 0);
  put_u64(out, matrix.rows.size());
  for (const auto& r : matrix.rows) {
    put_u64(out, r.frame_index);
    put_f64(out, r.voiced_fraction);
    for (double v : r.values) put_f64(out, v);
  }
  write_text_file(path, out);
}

std::optional<features::FrameFeatureMatrix> load_feature_cache(const std::filesystem::path& path,
                                                               std::uint64_t key) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  const std::string data = read_text_file(path);
  if (data.size() < sizeof kCacheMagic + 1 ||
      std::memcmp(data.data(), kCacheMagic, sizeof kCacheMagic) != 0) {
    throw DataError(path.string() + ": not a feature cache file");
  }
  if (static_cast<std::uint8_t>(data[sizeof kCacheMagic]) != kFeatureCacheVersion) return std::nullopt;
  // Reader holds a reference; keep the buffer alive for its lifetime.
  const std::string body = data.substr(sizeof kCacheMagic + 1);
  Reader rd(body, path.string());
  if (rd.u(8) != key) return std::nullopt;
  if (rd.str() != features::kFeatureTableVersion) return std::nullopt;
  features::FrameFeatureMatrix m;
  m.recording_id = rd.str();
  m.short_recording = rd.u(1) != 0;
  const std::uint64_t rows = rd.u(8);
  if (rows > body.size() / (8 * (features::kFeatureCount + 2))) {
    throw DataError(path.string() + ": implausible row count in feature cache");
  }
  m.rows.resize(rows);
  for (auto& row : m.rows) {
    row.frame_index = rd.u(8);
    row.voiced_fraction = rd.f64();
    for (double& v : row.values) v = rd.f64();
  }
  if (!rd.done()) throw DataError(path.string() + ": trailing bytes in feature cache");
  return m;
}

std::string features_csv_header() {
  std::vector<std::string> h{"id", "frame", "voiced_fraction"};
  for (auto name : features::kFeatureNames) h.emplace_back(name);
  std::ostringstream os;
  write_csv_row(os, h);
  return os.str();
}

std::string features_csv_rows(const features::FrameFeatureMatrix& matrix) {
  std::ostringstream os;
  char buf[40];
  for (const auto& r : matrix.rows) {
    std::vector<std::string> f{matrix.recording_id, std::to_string(r.frame_index)};
    std::snprintf(buf, sizeof buf, "%.17g", r.voiced_fraction);
    f.emplace_back(buf);
    for (double v : r.values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      f.emplace_back(buf);
    }
    write_csv_row(os, f);
  }
  return os.str();
}

std::vector<features::FrameFeatureMatrix> read_features_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  std::istringstream expected_header(features_csv_header());
  std::string line;
  std::getline(expected_header, line);
  const CsvTable expected = parse_csv(line);
  if (t.header != expected.header) {
    throw DataError(path.string() + ": header does not match feature table " +
                    std::string(features::kFeatureTableVersion));
  }
  std::vector<features::FrameFeatureMatrix> out;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& f = t.rows[r];
    auto [it, added] = index.emplace(f[0], out.size());
    if (added) {
      out.emplace_back();
      out.back().recording_id = f[0];
    }
    features::FrameFeatureVector v;
    try {
      v.frame_index = std::stoull(f[1]);
      v.voiced_fraction = std::stod(f[2]);
      for (std::size_t k = 0; k < features::kFeatureCount; ++k) v.values[k] = std::stod(f[3 + k]);
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(t.lines[r]) + ": malformed number");
    }
    out[it->second].rows.push_back(v);
  }
  return out;
}

}  // namespace adress::pipeline
