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

#include "adress/pipeline/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "adress/audio/wav.hpp"
#include "adress/common/error.hpp"
#include "adress/common/random.hpp"
#include "adress/common/seed.hpp"

namespace adress::pipeline {

namespace {

// Two-pole resonator with unity gain at DC removed by the (1 - r) factor.
class Resonator {
 public:
  Resonator(double bandwidth, int sr) : r_(std::exp(-std::numbers::pi * bandwidth / sr)), sr_(sr) {}

  double step(double x, double freq) {
    const double a1 = 2.0 * r_ * std::cos(2.0 * std::numbers::pi * freq / sr_);
    const double y = (1.0 - r_) * x + a1 * y1_ - r_ * r_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double r_;
  int sr_;
  double y1_ = 0.0, y2_ = 0.0;
};

// Vowel-like formant targets (Hz).
constexpr double kVowels[][3] = {
    {730, 1090, 2440}, {530, 1840, 2480}, {270, 2290, 3010},
    {570, 840, 2410},  {300, 870, 2240},  {660, 1720, 2410},
};

}  // namespace

int pseudo_mmse(double pause_ratio) {
  const double v = 30.0 - 40.0 * (pause_ratio - 0.10);
  return static_cast<int>(std::clamp(std::lround(v), 0L, 30L));
}

audio::Recording synthesize_voice(const SynthSpeaker& speaker, const VoiceClass& params,
                                  const SynthSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const int sr = spec.sample_rate;
  const auto total = static_cast<std::size_t>(std::lround(spec.seconds * sr));
  std::vector<double> x(total, 0.0);

  const double base_f0 = (speaker.gender == 'F' ? 200.0 : 115.0) * std::pow(2.0, rng.normal(0, 1.0) / 12.0);
  const double formant_scale = speaker.gender == 'F' ? 1.12 : 1.0;
  const double mean_utterance = 1.2;  // seconds
  const double pr = speaker.pause_ratio;
  const double mean_pause = mean_utterance * pr / (1.0 - pr);

  Resonator f1(90, sr), f2(110, sr), f3(150, sr);
  double phase = 0.0;
  std::size_t pos = static_cast<std::size_t>(rng.uniform(0.05, 0.3) * sr);
  while (pos < total) {
    // Utterance: a slow F0 contour with random semitone excursions.
    const auto len = static_cast<std::size_t>(std::max(0.25, rng.normal(mean_utterance, 0.35)) * sr);
    const double start_st = rng.normal(0.0, params.f0_variability_st);
    const double end_st = rng.normal(0.0, params.f0_variability_st);
    const double wobble_st = rng.normal(0.0, params.f0_variability_st * 0.5);
    const double wobble_hz = rng.uniform(1.5, 4.0);
    const double syllable_hz = rng.uniform(3.5, 5.5);
    std::size_t vowel = rng.index(std::size(kVowels));
    std::size_t next_vowel = rng.index(std::size(kVowels));
    const auto syllable_len = static_cast<std::size_t>(sr / syllable_hz);
    for (std::size_t i = 0; i < len && pos + i < total; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(len);
      const double st = start_st + (end_st - start_st) * u +
                        wobble_st * std::sin(2.0 * std::numbers::pi * wobble_hz * i / sr);
      const double f0 = base_f0 * std::pow(2.0, st / 12.0);
      phase += f0 / sr;
      phase -= std::floor(phase);
      const double source = (2.0 * phase - 1.0) + 0.03 * rng.normal();

      if (i % syllable_len == 0) {
        vowel = next_vowel;
        next_vowel = rng.index(std::size(kVowels));
      }
      const double blend = static_cast<double>(i % syllable_len) / syllable_len;
      double f[3];
      for (int k = 0; k < 3; ++k) {
        f[k] = formant_scale * (kVowels[vowel][k] + (kVowels[next_vowel][k] - kVowels[vowel][k]) * blend);
      }
      const double y = f1.step(source, f[0]) + 0.6 * f2.step(source, f[1]) + 0.3 * f3.step(source, f[2]);
      // Syllable-rate amplitude modulation plus short fades at utterance edges.
      const double am = 1.0 - params.am_depth * 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * syllable_hz * i / sr));
      const double edge = std::min({1.0, i / (0.02 * sr), (len - i) / (0.02 * sr)});
      x[pos + i] += y * am * edge;
    }
    pos += len;
    // Pause: exponential length with the mean implied by the pause ratio.
    const double pause = -mean_pause * std::log(std::max(1e-12, 1.0 - rng.uniform()));
    pos += static_cast<std::size_t>(std::clamp(pause, 0.15, 6.0 * mean_pause + 0.15) * sr);
  }

  // Room noise at about -60 dBFS and a random recording gain.
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  const double gain = std::pow(10.0, rng.uniform(-18.0, -3.0) / 20.0) / std::max(peak, 1e-12);
  for (double& v : x) v = v * gain + 1e-3 * rng.normal();

  audio::Recording rec;
  rec.id = speaker.id;
  rec.sample_rate = sr;
  rec.samples = std::move(x);
  return rec;
}

Manifest generate_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed,
                                   const std::filesystem::path& out_dir) {
  if (spec.per_class < 2) throw UsageError("synthetic corpus needs at least 2 recordings per class");
  if (!(spec.seconds >= 2.0) || spec.sample_rate < 16000) {
    throw UsageError("synthetic recordings need >= 2 s at >= 16 kHz");
  }
  for (const VoiceClass* v : {&spec.cn, &spec.ad}) {
    if (!(v->pause_ratio_min > 0.0 && v->pause_ratio_min <= v->pause_ratio_max &&
          v->pause_ratio_max < 0.9 && v->f0_variability_st >= 0.0 && v->am_depth >= 0.0 &&
          v->am_depth <= 1.0)) {
      throw UsageError("invalid synthetic voice class parameters");
    }
  }
  std::filesystem::create_directories(out_dir);
  Rng rng(derive_stage_seed(seed, "synth.speakers"));
  Manifest m;
  for (int c = 0; c < 2; ++c) {
    const Group g = c == 0 ? Group::kCN : Group::kAD;
    const VoiceClass& params = c == 0 ? spec.cn : spec.ad;
    for (int i = 0; i < spec.per_class; ++i) {
      SynthSpeaker s;
      char id[64];
      std::snprintf(id, sizeof id, "%s_%s_%03d", spec.id_prefix.c_str(), c == 0 ? "cn" : "ad", i);
      s.id = id;
      s.group = g;
      s.pause_ratio = rng.uniform(params.pause_ratio_min, params.pause_ratio_max);
      s.age = std::round(rng.uniform(58.0, 85.0));
      s.gender = i % 2 == 0 ? 'F' : 'M';
      const audio::Recording rec =
          synthesize_voice(s, params, spec, derive_stage_seed(seed, "synth.voice." + s.id));
      const auto path = out_dir / (s.id + ".wav");
      audio::write_wav(path, rec, audio::WavEncoding::kPcm16);

      ManifestEntry e;
      e.id = s.id;
      e.audio_path = path;
      e.group = g;
      e.mmse = pseudo_mmse(s.pause_ratio);
      e.age = s.age;
      e.gender = s.gender;
      e.language = spec.language;
      m.push_back(e);
    }
  }
  write_manifest(out_dir / "manifest.csv", m);
  return m;
}

}  // namespace adress::pipeline
