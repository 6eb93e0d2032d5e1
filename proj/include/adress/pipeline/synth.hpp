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

#ifndef ADRESS_PIPELINE_SYNTH_HPP_
#define ADRESS_PIPELINE_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include "adress/audio/recording.hpp"
#include "adress/pipeline/manifest.hpp"

namespace adress::pipeline {

// Generative parameters of one synthetic speaker group.
struct VoiceClass {
  // Standard deviation, in semitones, of the F0 contour around its base.
  double f0_variability_st = 3.0;
  // Fraction of the recording spent in pauses, drawn uniformly per speaker.
  double pause_ratio_min = 0.08;
  double pause_ratio_max = 0.25;
  // Depth of the syllable-rate amplitude modulation, 0..1.
  double am_depth = 0.7;
};

struct SynthSpec {
  int per_class = 10;
  double seconds = 20.0;
  int sample_rate = 16000;
  VoiceClass cn;
  VoiceClass ad{0.6, 0.40, 0.65, 0.2};
  std::string language = "en";
  std::string id_prefix = "syn";
};

// Pseudo-MMSE: 30 at pause ratio 0.1 falling 4 points per additional 0.1,
// rounded and clamped to 0..30.
int pseudo_mmse(double pause_ratio);

struct SynthSpeaker {
  std::string id;
  Group group = Group::kCN;
  double pause_ratio = 0.0;
  double age = 0.0;
  char gender = 'M';
};

// One recording: voiced stretches of a sawtooth-plus-aspiration source shaped
// by three formant resonators, separated by near-silent pauses.
audio::Recording synthesize_voice(const SynthSpeaker& speaker, const VoiceClass& params,
                                  const SynthSpec& spec, std::uint64_t seed);

// Writes <out_dir>/<id>.wav for 2 * per_class speakers and
// <out_dir>/manifest.csv, returning the manifest. Ages are drawn from the same
// range and genders alternate in both groups. Deterministic for fixed
// (spec, seed).
Manifest generate_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed,
                                   const std::filesystem::path& out_dir);

}  // namespace adress::pipeline

#endif  // ADRESS_PIPELINE_SYNTH_HPP_
