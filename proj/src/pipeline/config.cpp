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

#include "adress/pipeline/config.hpp"

#include <cinttypes>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

#include "adress/common/error.hpp"
#include "adress/common/seed.hpp"
#include "adress/pipeline/csv.hpp"

namespace adress::pipeline {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& v) {
  std::size_t used = 0;
  const double d = std::stod(v, &used);
  if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument("not a finite number");
  return d;
}

long long to_integer(const std::string& v) {
  std::size_t used = 0;
  const long long i = std::stoll(v, &used);
  if (used != v.size()) throw std::invalid_argument("not an integer");
  return i;
}

bool to_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::invalid_argument("expected true or false");
}

struct Key {
  const char* name;
  std::function<std::string(const PipelineConfig&)> get;
  // Throws std::invalid_argument / std::out_of_range on bad values.
  std::function<void(PipelineConfig&, const std::string&)> set;
};

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

template <typename Get, typename Set>
Key real_key(const char* name, Get get, Set set) {
  return {name, [get](const PipelineConfig& c) { return fmt_double(get(c)); },
          [set](PipelineConfig& c, const std::string& v) { set(c, to_double(v)); }};
}

template <typename Get, typename Set>
Key int_key(const char* name, Get get, Set set) {
  return {name, [get](const PipelineConfig& c) { return std::to_string(get(c)); },
          [set](PipelineConfig& c, const std::string& v) { set(c, to_integer(v)); }};
}

template <typename Get, typename Set>
Key bool_key(const char* name, Get get, Set set) {
  return {name, [get](const PipelineConfig& c) { return std::string(get(c) ? "true" : "false"); },
          [set](PipelineConfig& c, const std::string& v) { set(c, to_bool(v)); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      {"seed", [](const PipelineConfig& c) { return std::to_string(c.seed); },
       [](PipelineConfig& c, const std::string& v) {
         std::size_t used = 0;
         require(!v.empty() && v[0] != '-', "seed must be a non-negative integer");
         c.seed = std::stoull(v, &used);
         require(used == v.size(), "seed must be a non-negative integer");
       }},
      int_key("threads", [](const PipelineConfig& c) { return c.threads; },
              [](PipelineConfig& c, long long v) {
                require(v >= 0 && v <= 1024, "threads must be in 0..1024");
                c.threads = static_cast<int>(v);
              }),
      real_key("loudness.target_lufs", [](const PipelineConfig& c) { return c.loudness.target_lufs; },
               [](PipelineConfig& c, double v) {
                 require(v < 0.0 && v > -70.0, "target must lie in (-70, 0) LUFS");
                 c.loudness.target_lufs = v;
               }),
      bool_key("loudness.hard_clip", [](const PipelineConfig& c) { return c.loudness.hard_clip; },
               [](PipelineConfig& c, bool v) { c.loudness.hard_clip = v; }),
      real_key("features.window_ms", [](const PipelineConfig& c) { return c.features.window_ms; },
               [](PipelineConfig& c, double v) {
                 require(v >= 5.0 && v <= 200.0, "window must be 5..200 ms");
                 c.features.window_ms = v;
               }),
      real_key("features.hop_ms", [](const PipelineConfig& c) { return c.features.hop_ms; },
               [](PipelineConfig& c, double v) {
                 require(v >= 1.0 && v <= 200.0, "hop must be 1..200 ms");
                 c.features.hop_ms = v;
               }),
      real_key("features.pitch_window_ms",
               [](const PipelineConfig& c) { return c.features.pitch_window_ms; },
               [](PipelineConfig& c, double v) {
                 require(v >= 10.0 && v <= 500.0, "pitch window must be 10..500 ms");
                 c.features.pitch_window_ms = v;
               }),
      real_key("features.f0_min_hz", [](const PipelineConfig& c) { return c.features.f0_min_hz; },
               [](PipelineConfig& c, double v) {
                 require(v >= 20.0, "f0_min_hz must be >= 20");
                 c.features.f0_min_hz = v;
               }),
      real_key("features.f0_max_hz", [](const PipelineConfig& c) { return c.features.f0_max_hz; },
               [](PipelineConfig& c, double v) {
                 require(v <= 4000.0, "f0_max_hz must be <= 4000");
                 c.features.f0_max_hz = v;
               }),
      real_key("features.voicing_threshold",
               [](const PipelineConfig& c) { return c.features.voicing_threshold; },
               [](PipelineConfig& c, double v) {
                 require(v > 0.0 && v < 1.0, "voicing threshold must be in (0, 1)");
                 c.features.voicing_threshold = v;
               }),
      int_key("adr.c_classification", [](const PipelineConfig& c) { return c.adr_c_classification; },
              [](PipelineConfig& c, long long v) {
                require(v >= 1 && v <= 1000, "C must be 1..1000");
                c.adr_c_classification = static_cast<int>(v);
              }),
      int_key("adr.c_regression", [](const PipelineConfig& c) { return c.adr_c_regression; },
              [](PipelineConfig& c, long long v) {
                require(v >= 1 && v <= 1000, "C must be 1..1000");
                c.adr_c_regression = static_cast<int>(v);
              }),
      int_key("adr.epochs", [](const PipelineConfig& c) { return c.adr_epochs; },
              [](PipelineConfig& c, long long v) {
                require(v >= 0 && v <= 100000, "epochs must be 0..100000");
                c.adr_epochs = static_cast<int>(v);
              }),
      bool_key("adr.duration_stats", [](const PipelineConfig& c) { return c.adr_duration_stats; },
               [](PipelineConfig& c, bool v) { c.adr_duration_stats = v; }),
      {"svr.gamma",
       [](const PipelineConfig& c) { return c.svr.gamma ? fmt_double(*c.svr.gamma) : "auto"; },
       [](PipelineConfig& c, const std::string& v) {
         if (v == "auto") {
           c.svr.gamma.reset();
           return;
         }
         const double g = to_double(v);
         require(g > 0.0, "gamma must be positive or auto");
         c.svr.gamma = g;
       }},
      real_key("svr.epsilon", [](const PipelineConfig& c) { return c.svr.epsilon; },
               [](PipelineConfig& c, double v) {
                 require(v >= 0.0, "epsilon must be >= 0");
                 c.svr.epsilon = v;
               }),
      real_key("svr.box", [](const PipelineConfig& c) { return c.svr.box; },
               [](PipelineConfig& c, double v) {
                 require(v > 0.0, "box constraint must be positive");
                 c.svr.box = v;
               }),
      real_key("svr.tolerance", [](const PipelineConfig& c) { return c.svr.tolerance; },
               [](PipelineConfig& c, double v) {
                 require(v > 0.0, "tolerance must be positive");
                 c.svr.tolerance = v;
               }),
      int_key("svr.max_iterations", [](const PipelineConfig& c) { return c.svr.max_iterations; },
              [](PipelineConfig& c, long long v) {
                require(v >= 1, "max_iterations must be >= 1");
                c.svr.max_iterations = static_cast<long>(v);
              }),
      {"grid.candidates",
       [](const PipelineConfig& c) {
         std::string s;
         for (int v : c.grid_candidates) s += (s.empty() ? "" : ",") + std::to_string(v);
         return s;
       },
       [](PipelineConfig& c, const std::string& v) {
         std::vector<int> out;
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           const long long x = to_integer(trim(item));
           require(x >= 1 && x <= 1000, "candidates must be 1..1000");
           out.push_back(static_cast<int>(x));
         }
         require(!out.empty(), "at least one candidate required");
         c.grid_candidates = out;
       }},
      int_key("grid.folds", [](const PipelineConfig& c) { return c.grid_folds; },
              [](PipelineConfig& c, long long v) {
                require(v >= 2 && v <= 100, "folds must be 2..100");
                c.grid_folds = static_cast<int>(v);
              }),
      real_key("matching.caliper_sd", [](const PipelineConfig& c) { return c.matching_caliper_sd; },
               [](PipelineConfig& c, double v) {
                 require(v > 0.0, "caliper must be positive");
                 c.matching_caliper_sd = v;
               }),
  };
  return k;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : keys()) out.push_back(k.name);
  return out;
}

PipelineConfig parse_config(const std::string& text, const std::string& source) {
  PipelineConfig c;
  std::set<std::string> seen;
  bool have_version = false;
  std::istringstream in(text);
  std::string raw;
  for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
    const std::string where = source + ":" + std::to_string(line_no);
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw UsageError(where + ": key '" + key + "' given twice");
    if (key == "schema_version") {
      if (value != std::to_string(kConfigSchemaVersion)) {
        throw UsageError(where + ": unsupported schema_version '" + value + "'");
      }
      have_version = true;
      continue;
    }
    const Key* match = nullptr;
    for (const auto& k : keys()) {
      if (key == k.name) match = &k;
    }
    if (!match) throw UsageError(where + ": unknown key '" + key + "'");
    try {
      match->set(c, value);
    } catch (const std::invalid_argument& e) {
      throw UsageError(where + ": bad value '" + value + "' for " + key + ": " + e.what());
    } catch (const std::out_of_range&) {
      throw UsageError(where + ": value '" + value + "' for " + key + " is out of range");
    }
  }
  if (!have_version) throw UsageError(source + ": missing schema_version");
  if (c.features.f0_min_hz >= c.features.f0_max_hz) {
    throw UsageError(source + ": features.f0_min_hz must be below features.f0_max_hz");
  }
  return c;
}

PipelineConfig read_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  return parse_config(text, path.string());
}

std::string format_config(const PipelineConfig& c) {
  std::string out = "schema_version = " + std::to_string(kConfigSchemaVersion) + "\n";
  for (const auto& k : keys()) out += std::string(k.name) + " = " + k.get(c) + "\n";
  return out;
}

std::string config_hash(const PipelineConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(format_config(c)));
  return buf;
}

}  // namespace adress::pipeline
