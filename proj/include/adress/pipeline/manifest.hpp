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

#ifndef ADRESS_PIPELINE_MANIFEST_HPP_
#define ADRESS_PIPELINE_MANIFEST_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adress/common/group.hpp"
#include "adress/eval/metrics.hpp"

namespace adress::pipeline {

// Column order of every manifest file.
inline constexpr const char* kManifestColumns[] = {"id",  "audio_path", "group",   "mmse",
                                                   "age", "gender",     "language"};

struct ManifestEntry {
  std::string id;
  // Resolved against the manifest's directory when relative.
  std::filesystem::path audio_path;
  std::optional<Group> group;
  std::optional<int> mmse;  // 0..30
  double age = 0.0;
  char gender = 'M';  // 'M' or 'F'
  std::string language;

  double gender_code() const { return gender == 'F' ? 1.0 : 0.0; }
};

using Manifest = std::vector<ManifestEntry>;

Manifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                        const std::string& source = "<manifest>");
Manifest read_manifest(const std::filesystem::path& path);

// Audio paths are written relative to `base_dir` when they lie below it.
std::string format_manifest(const Manifest& m, const std::filesystem::path& base_dir);
void write_manifest(const std::filesystem::path& path, const Manifest& m);

// Copy with group and MMSE removed: all that prediction stages may see.
Manifest strip_labels(const Manifest& m);

std::vector<eval::Reference> references(const Manifest& m);

}  // namespace adress::pipeline

#endif  // ADRESS_PIPELINE_MANIFEST_HPP_
