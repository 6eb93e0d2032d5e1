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

#ifndef ADRESS_PIPELINE_CONFIG_HPP_
#define ADRESS_PIPELINE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adress/audio/loudness.hpp"
#include "adress/features/lld.hpp"
#include "adress/models/svr.hpp"

namespace adress::pipeline {

inline constexpr int kConfigSchemaVersion = 1;

struct PipelineConfig {
  std::uint64_t seed = 20230401;
  int threads = 0;  // 0 = hardware concurrency

  audio::NormalizeOptions loudness;
  features::LldConfig features;

  // SOM sizes used when no grid search is run: 15 for classification and
  // 25 for regression, the winners reported for the original baseline.
  int adr_c_classification = 15;
  int adr_c_regression = 25;
  int adr_epochs = 100;
  bool adr_duration_stats = false;

  models::SvrOptions svr;

  std::vector<int> grid_candidates{5, 10, 15, 20, 25};
  int grid_folds = 5;

  double matching_caliper_sd = 0.2;
};

// Text format: one `key = value` per line, `#` starts a comment. The file
// must declare `schema_version = 1`; unknown keys, repeated keys and
// malformed values are UsageErrors naming the line.
PipelineConfig parse_config(const std::string& text, const std::string& source = "<config>");
PipelineConfig read_config(const std::filesystem::path& path);

// Every key in a fixed order with round-trippable values.
std::string format_config(const PipelineConfig& c);

// FNV-1a of format_config, as 16 hex digits.
std::string config_hash(const PipelineConfig& c);

std::vector<std::string> config_keys();

}  // namespace adress::pipeline

#endif  // ADRESS_PIPELINE_CONFIG_HPP_
