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

#ifndef ADRESS_PIPELINE_PERSISTENCE_HPP_
#define ADRESS_PIPELINE_PERSISTENCE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "adress/adr/adr.hpp"
#include "adress/eval/metrics.hpp"
#include "adress/features/extractor.hpp"
#include "adress/models/naive_bayes.hpp"
#include "adress/models/svr.hpp"

namespace adress::pipeline {

inline constexpr int kModelSchemaVersion = 1;
inline constexpr char kAdrMagic[] = "ADRESS-ADR";
inline constexpr char kModelMagic[] = "ADRESS-MODEL";

// ADR front end plus the learner for one task.
struct TaskModel {
  eval::Task task = eval::Task::kClassification;
  adr::AdrModel adr;
  std::optional<models::KdeNaiveBayesModel> nb;   // classification
  std::optional<models::SvrModel> svr;            // regression
};

// Files are a magic line "<MAGIC> <schema version>" followed by JSON. Doubles
// round-trip exactly. Loading checks the magic, the schema version and the
// feature table version, raising DataError on any mismatch.
void save_adr(const std::filesystem::path& path, const adr::AdrModel& model);
adr::AdrModel load_adr(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const TaskModel& model);
TaskModel load_model(const std::filesystem::path& path);

// Binary per-recording feature cache:
//   "ADRFEAT\0", u8 version, u64 key, str table version, str id, u8 short,
//   u64 rows, rows x (u64 frame index, f64 voiced fraction, 88 x f64)
// with little-endian integers and strings as u32 length + bytes.
inline constexpr std::uint8_t kFeatureCacheVersion = 1;

void save_feature_cache(const std::filesystem::path& path,
                        const features::FrameFeatureMatrix& matrix, std::uint64_t key);
// nullopt when the file is absent, stale (key differs) or from another
// feature table version. Corrupt files raise DataError.
std::optional<features::FrameFeatureMatrix> load_feature_cache(const std::filesystem::path& path,
                                                               std::uint64_t key);

// id,frame,voiced_fraction,<88 feature names>
std::string features_csv_header();
std::string features_csv_rows(const features::FrameFeatureMatrix& matrix);
std::vector<features::FrameFeatureMatrix> read_features_csv(const std::filesystem::path& path);

}  // namespace adress::pipeline

#endif  // ADRESS_PIPELINE_PERSISTENCE_HPP_
