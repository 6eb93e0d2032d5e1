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

#ifndef ADRESS_AUDIO_LOUDNESS_HPP_
#define ADRESS_AUDIO_LOUDNESS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "adress/audio/recording.hpp"

namespace adress::audio {

inline constexpr double kDefaultTargetLufs = -23.0;
inline constexpr double kAbsoluteGateLufs = -70.0;
inline constexpr double kRelativeGateLu = -10.0;
inline constexpr double kBlockSeconds = 0.4;
inline constexpr double kStepSeconds = 0.1;

// Gains smaller than this (in dB) are treated as exactly zero so that an
// already-normalized recording passes through bit-identical.
inline constexpr double kIdentityGainToleranceDb = 1e-6;

struct Biquad {
  std::array<double, 3> b{};
  std::array<double, 3> a{1.0, 0.0, 0.0};  // a[0] is always 1
};

// Pre-filter (high shelf) and RLB high-pass of the BS.1770 K-weighting,
// designed for an arbitrary sample rate from the analog prototypes.
struct KWeighting {
  Biquad shelf;
  Biquad highpass;
};

KWeighting k_weighting(int sample_rate);

struct LoudnessReport {
  // -infinity when every gating block falls below the absolute gate.
  double integrated_lufs = 0.0;
  // Blocks surviving both the absolute and relative gates.
  std::size_t gating_block_count = 0;
  std::optional<double> target_lufs;
  std::optional<double> applied_gain_db;
  std::size_t clip_count = 0;
};

// Integrated loudness per ITU-R BS.1770 (mono, channel weight 1): K-weighting,
// 400 ms blocks with 75% overlap, -70 LUFS absolute and -10 LU relative gates.
// Throws DataError when the recording is shorter than one gating block.
LoudnessReport measure_loudness(const Recording& rec);

struct NormalizeOptions {
  double target_lufs = kDefaultTargetLufs;
  // Clamp samples outside [-1, 1] after the gain. Clipped samples are counted
  // either way.
  bool hard_clip = true;
};

struct NormalizedRecording {
  Recording recording;
  LoudnessReport report;
};

// Two-pass normalization: measure, then apply one constant gain. Refuses
// silent input (integrated loudness -inf) with a DataError naming the id.
NormalizedRecording normalize_loudness(const Recording& rec,
                                       const NormalizeOptions& options = {});

}  // namespace adress::audio

#endif  // ADRESS_AUDIO_LOUDNESS_HPP_
