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

#include "adress/audio/loudness.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "adress/common/error.hpp"

namespace adress::audio {

namespace {

std::vector<double> apply_biquad(const Biquad& f, std::span<const double> x) {
  std::vector<double> y(x.size());
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double in = x[n];
    const double out = f.b[0] * in + s1;
    s1 = f.b[1] * in - f.a[1] * out + s2;
    s2 = f.b[2] * in - f.a[2] * out;
    y[n] = out;
  }
  return y;
}

double block_loudness(double mean_square) {
  return -0.691 + 10.0 * std::log10(mean_square);
}

}  // namespace

KWeighting k_weighting(int sample_rate) {
  const double fs = static_cast<double>(sample_rate);
  KWeighting kw;

  {
    const double f0 = 1681.974450955533;
    const double gain_db = 3.999843853973347;
    const double q = 0.7071752369554196;
    const double k = std::tan(std::numbers::pi * f0 / fs);
    const double vh = std::pow(10.0, gain_db / 20.0);
    const double vb = std::pow(vh, 0.4996667741545416);
    const double a0 = 1.0 + k / q + k * k;
    kw.shelf.b = {(vh + vb * k / q + k * k) / a0, 2.0 * (k * k - vh) / a0,
                  (vh - vb * k / q + k * k) / a0};
    kw.shelf.a = {1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0};
  }
  {
    const double f0 = 38.13547087602444;
    const double q = 0.5003270373238773;
    const double k = std::tan(std::numbers::pi * f0 / fs);
    const double a0 = 1.0 + k / q + k * k;
    kw.highpass.b = {1.0, -2.0, 1.0};
    kw.highpass.a = {1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0};
  }
  return kw;
}

LoudnessReport measure_loudness(const Recording& rec) {
  if (rec.sample_rate <= 0) {
    throw DataError(rec.id + ": invalid sample rate");
  }
  const auto block = static_cast<std::size_t>(std::lround(kBlockSeconds * rec.sample_rate));
  const auto step = static_cast<std::size_t>(std::lround(kStepSeconds * rec.sample_rate));
  if (rec.samples.size() < block) {
    throw DataError(rec.id + ": shorter than one 400 ms gating block");
  }

  const KWeighting kw = k_weighting(rec.sample_rate);
  const std::vector<double> weighted =
      apply_biquad(kw.highpass, apply_biquad(kw.shelf, rec.samples));

  // Prefix sums of squares make each block O(1).
  std::vector<double> prefix(weighted.size() + 1, 0.0);
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    prefix[i + 1] = prefix[i] + weighted[i] * weighted[i];
  }
  const std::size_t block_count = (weighted.size() - block) / step + 1;
  std::vector<double> powers;
  powers.reserve(block_count);
  for (std::size_t j = 0; j < block_count; ++j) {
    const std::size_t start = j * step;
    const double z = (prefix[start + block] - prefix[start]) / static_cast<double>(block);
    if (z > 0.0 && block_loudness(z) > kAbsoluteGateLufs) {
      powers.push_back(z);
    }
  }

  LoudnessReport report;
  if (powers.empty()) {
    report.integrated_lufs = -std::numeric_limits<double>::infinity();
    return report;
  }
  double sum = 0.0;
  for (double z : powers) sum += z;
  const double relative_gate = block_loudness(sum / powers.size()) + kRelativeGateLu;

  double kept_sum = 0.0;
  std::size_t kept = 0;
  for (double z : powers) {
    if (block_loudness(z) > relative_gate) {
      kept_sum += z;
      ++kept;
    }
  }
  report.integrated_lufs = block_loudness(kept_sum / static_cast<double>(kept));
  report.gating_block_count = kept;
  return report;
}

NormalizedRecording normalize_loudness(const Recording& rec,
                                       const NormalizeOptions& options) {
  const LoudnessReport measured = measure_loudness(rec);
  if (!std::isfinite(measured.integrated_lufs)) {
    throw DataError(rec.id + ": silent recording, loudness is -inf; refusing to normalize");
  }

  NormalizedRecording out;
  out.recording = rec;
  out.report = measured;
  out.report.target_lufs = options.target_lufs;

  double gain_db = options.target_lufs - measured.integrated_lufs;
  if (std::abs(gain_db) < kIdentityGainToleranceDb) {
    out.report.applied_gain_db = 0.0;
    return out;
  }
  out.report.applied_gain_db = gain_db;

  const double gain = std::pow(10.0, gain_db / 20.0);
  std::size_t clipped = 0;
  for (double& s : out.recording.samples) {
    s *= gain;
    if (std::abs(s) > 1.0) {
      ++clipped;
      if (options.hard_clip) s = std::copysign(1.0, s);
    }
  }
  out.report.clip_count = clipped;
  return out;
}

}  // namespace adress::audio
