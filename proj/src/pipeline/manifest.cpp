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

#include "adress/pipeline/manifest.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "adress/common/error.hpp"
#include "adress/pipeline/csv.hpp"

namespace adress::pipeline {

namespace {

double parse_number(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw DataError(where + ": '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

Manifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                        const std::string& source) {
  const CsvTable t = parse_csv(text, source);
  const std::vector<std::string> expected(std::begin(kManifestColumns), std::end(kManifestColumns));
  if (t.header != expected) {
    throw DataError(source + ": header must be exactly id,audio_path,group,mmse,age,gender,language");
  }
  Manifest m;
  std::set<std::string> ids;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& f = t.rows[r];
    const std::string where = source + ":" + std::to_string(t.lines[r]);
    ManifestEntry e;
    e.id = f[0];
    if (e.id.empty()) throw DataError(where + ": empty id");
    if (!ids.insert(e.id).second) throw DataError(where + ": duplicate id '" + e.id + "'");
    if (f[1].empty()) throw DataError(where + ": empty audio_path");
    e.audio_path = f[1];
    if (e.audio_path.is_relative()) e.audio_path = base_dir / e.audio_path;
    if (!f[2].empty()) {
      e.group = parse_group(f[2]);
      if (!e.group) throw DataError(where + ": group must be CN or AD, got '" + f[2] + "'");
    }
    if (!f[3].empty()) {
      const double v = parse_number(f[3], where + " mmse");
      if (v != std::floor(v) || v < 0 || v > 30) {
        throw DataError(where + ": mmse must be an integer in 0..30, got '" + f[3] + "'");
      }
      e.mmse = static_cast<int>(v);
    }
    e.age = parse_number(f[4], where + " age");
    if (!(e.age > 0.0)) throw DataError(where + ": age must be positive");
    if (f[5] != "M" && f[5] != "F") throw DataError(where + ": gender must be M or F");
    e.gender = f[5][0];
    e.language = f[6];
    m.push_back(std::move(e));
  }
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path), path.parent_path(), path.string());
}

std::string format_manifest(const Manifest& m, const std::filesystem::path& base_dir) {
  std::ostringstream os;
  write_csv_row(os, std::vector<std::string>(std::begin(kManifestColumns), std::end(kManifestColumns)));
  for (const auto& e : m) {
    std::string audio = e.audio_path.string();
    if (!base_dir.empty()) {
      const auto rel = e.audio_path.lexically_relative(base_dir);
      if (!rel.empty() && *rel.begin() != "..") audio = rel.generic_string();
    }
    std::ostringstream age;
    age << e.age;
    write_csv_row(os, {e.id, audio, e.group ? std::string(to_string(*e.group)) : "",
                       e.mmse ? std::to_string(*e.mmse) : "", age.str(), std::string(1, e.gender),
                       e.language});
  }
  return os.str();
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  write_text_file(path, format_manifest(m, path.parent_path()));
}

Manifest strip_labels(const Manifest& m) {
  Manifest out = m;
  for (auto& e : out) {
    e.group.reset();
    e.mmse.reset();
  }
  return out;
}

std::vector<eval::Reference> references(const Manifest& m) {
  std::vector<eval::Reference> out;
  for (const auto& e : m) {
    eval::Reference r;
    r.id = e.id;
    r.group = e.group;
    if (e.mmse) r.mmse = *e.mmse;
    out.push_back(r);
  }
  return out;
}

}  // namespace adress::pipeline
