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

#ifndef ADRESS_COMMON_SEED_HPP_
#define ADRESS_COMMON_SEED_HPP_

#include <cstdint>
#include <string_view>

namespace adress {

// 64-bit FNV-1a. Used wherever a stable, platform-independent hash is needed
// (stage seeds, config fingerprints); std::hash gives no such guarantee.
constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-stage seed: splitmix64(run_seed ^ fnv1a64(stage_name)).
constexpr std::uint64_t derive_stage_seed(std::uint64_t run_seed,
                                          std::string_view stage) noexcept {
  return splitmix64(run_seed ^ fnv1a64(stage));
}

}  // namespace adress

#endif  // ADRESS_COMMON_SEED_HPP_
