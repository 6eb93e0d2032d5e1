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

#ifndef ADRESS_COMMON_GROUP_HPP_
#define ADRESS_COMMON_GROUP_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace adress {

// Diagnostic group. AD is the positive class everywhere.
enum class Group { kCN = 0, kAD = 1 };

inline std::string_view to_string(Group g) { return g == Group::kAD ? "AD" : "CN"; }

inline std::optional<Group> parse_group(std::string_view s) {
  if (s == "AD") return Group::kAD;
  if (s == "CN") return Group::kCN;
  return std::nullopt;
}

}  // namespace adress

#endif  // ADRESS_COMMON_GROUP_HPP_
