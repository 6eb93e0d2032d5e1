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

#ifndef ADRESS_PIPELINE_CSV_HPP_
#define ADRESS_PIPELINE_CSV_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace adress::pipeline {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based line number of each row in the source, for error messages.
  std::vector<std::size_t> lines;

  // Index of a header column, or -1.
  int column(const std::string& name) const;
};

// Comma-separated, double-quote escaping, CRLF tolerated, blank lines skipped.
// Every row must have as many fields as the header.
CsvTable parse_csv(const std::string& text, const std::string& source = "<csv>");
CsvTable read_csv(const std::filesystem::path& path);

std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

std::string read_text_file(const std::filesystem::path& path);
// Writes through a temporary file and renames, so readers never see a
// half-written file.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace adress::pipeline

#endif  // ADRESS_PIPELINE_CSV_HPP_
