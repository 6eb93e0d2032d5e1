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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "adress/audio/loudness.hpp"
#include "adress/audio/wav.hpp"
#include "adress/features/extractor.hpp"
#include "adress/features/feature_table.hpp"
#include "adress/features/functionals.hpp"
#include "adress/features/lld.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "signals.hpp"

using namespace adress;
using namespace adress::features;
namespace t = adress::testing;
using t::make_frame;
using t::median_voiced_semitone;

namespace {

std::vector<double> resonator(std::vector<double> x, double freq, double bandwidth, int sr) {
  const double r = std::exp(-std::numbers::pi * bandwidth / sr);
  const double a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / sr);
  const double a2 = -r * r;
  double y1 = 0.0, y2 = 0.0;
  for (double& v : x) {
    const double y = v + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    v = y * (1.0 - r);
  }
  return x;
}

// Reference spectral flux: naive O(N^2) DFT of each Hamming-windowed
// sub-window, magnitudes normalized to unit sum, squared L2 difference of
// consecutive spectra, averaged over all sub-windows (first contributes 0).
double reference_mean_flux(const std::vector<double>& x, int sr) {
  const std::size_t win = static_cast<std::size_t>(0.025 * sr);
  const std::size_t hop = static_cast<std::size_t>(0.010 * sr);
  std::size_t nfft = 1;
  while (nfft < win) nfft <<= 1;
  const std::size_t count = (x.size() - win) / hop + 1;
  std::vector<double> prev;
  double total = 0.0;
  for (std::size_t t = 0; t < count; ++t) {
    std::vector<double> mag(nfft / 2 + 1);
    double sum = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < win; ++i) {
        const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (win - 1));
        acc += w * x[t * hop + i] * std::polar(1.0, -2.0 * std::numbers::pi * k * i / nfft);
      }
      mag[k] = std::abs(acc);
      sum += mag[k];
    }
    for (double& m : mag) m /= sum;
    if (!prev.empty()) {
      for (std::size_t k = 0; k < mag.size(); ++k) total += (mag[k] - prev[k]) * (mag[k] - prev[k]);
    }
    prev = mag;
  }
  return total / count;
}

// 50 ms blocks alternating between a 1 kHz tone and white noise.
std::vector<double> alternating_tone_noise() {
  const auto tone = t::sine(1000.0, 0.3, 1.0, 16000);
  const auto noise = t::white_noise(0.1, 16000, 2);
  std::vector<double> x(16000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i / 800) % 2 ? tone[i] : noise[i];
  return x;
}

}  // namespace

TEST_CASE("feature table has 88 unique names") {
  std::set<std::string_view> names(kFeatureNames.begin(), kFeatureNames.end());
  CHECK(names.size() == kFeatureCount);
  CHECK(kFeatureNames[column::kF0Percentile50] == "F0semitoneFrom27.5Hz_percentile50.0");
  CHECK(kFeatureNames[column::kJitterMean] == "jitterLocal_amean");
  CHECK(kFeatureNames[column::kEquivalentSoundLevel] == "equivalentSoundLevel_dBp");
}

TEST_CASE("one-second frame yields 98 sub-windows in every full-length series") {
  CHECK(subwindow_count(16000, 400, 160) == 98);
  CHECK(subwindow_count(44100, 1103, 441) == 98);
  const LldSeries s = extract_llds(make_frame(t::white_noise(0.1, 16000, 4)));
  CHECK(s.count == 98);
  for (const auto* v : {&s.f0_semitone, &s.loudness, &s.spectral_flux, &s.alpha_ratio,
                        &s.hammarberg_index, &s.slope_0_500, &s.slope_500_1500, &s.hnr_db,
                        &s.h1_h2, &s.h1_a3, &s.mfcc[0], &s.mfcc[3], &s.formant_freq[2]}) {
    CHECK(v->size() == 98);
  }
  CHECK(s.voiced.size() == 98);
}

TEST_CASE("extract_llds rejects sample rates below 16 kHz") {
  CHECK_THROWS_AS(extract_llds(make_frame(std::vector<double>(8000, 0.0), 8000)), DataError);
}

TEST_CASE("220 Hz sawtooth is voiced at 36 semitones") {
  const LldSeries s = extract_llds(make_frame(t::sawtooth(220.0, 0.5, 1.0, 16000)));
  CHECK(s.voiced_fraction() == 1.0);
  for (std::size_t i = 0; i < s.count; ++i) {
    CHECK(std::abs(s.f0_semitone[i] - 36.0) <= 0.3);
  }
}

TEST_CASE("median F0 of periodic signals is within 0.3 semitone") {
  for (double f0 : {110.0, 220.0, 440.0}) {
    const double expected = 12.0 * std::log2(f0 / 27.5);
    CHECK(std::abs(median_voiced_semitone(extract_llds(make_frame(t::sawtooth(f0, 0.5, 1.0, 16000))))) -
          expected <= 0.3);
    CHECK(std::abs(median_voiced_semitone(extract_llds(make_frame(t::sine(f0, 0.5, 1.0, 16000))))) -
          expected <= 0.3);
  }
  // Non-integer period at a different rate.
  const LldSeries s = extract_llds(make_frame(t::sawtooth(133.0, 0.5, 1.0, 22050), 22050));
  CHECK(std::abs(median_voiced_semitone(s) - 12.0 * std::log2(133.0 / 27.5)) <= 0.3);
}

TEST_CASE("silence is unvoiced with empty perturbation series") {
  const LldSeries s = extract_llds(make_frame(std::vector<double>(16000, 0.0)));
  CHECK(s.voiced_fraction() == 0.0);
  CHECK(s.jitter_local.empty());
  CHECK(s.shimmer_local_db.empty());

  const FrameFeatureVector v = apply_functionals(s);
  for (std::size_t i = 0; i < 10; ++i) CHECK(v.values[i] == 0.0);
  for (std::size_t i = 30; i < 58; ++i) CHECK(v.values[i] == 0.0);
  for (std::size_t i = 58; i < 76; ++i) CHECK(v.values[i] == 0.0);
  for (double x : v.values) CHECK(std::isfinite(x));
  CHECK(v.voiced_fraction == 0.0);
}

TEST_CASE("pulse train has zero jitter and shimmer") {
  for (std::size_t period : {40u, 80u, 160u, 200u}) {
    const LldSeries s = extract_llds(make_frame(t::pulse_train(period, 0.8, 16000, 7)));
    CHECK(s.voiced_fraction() == 1.0);
    REQUIRE_FALSE(s.jitter_local.empty());
    for (double j : s.jitter_local) CHECK(j < 1e-6);
    for (double sh : s.shimmer_local_db) CHECK(sh < 1e-6);
  }
}

TEST_CASE("measure_pulses on hand-built segments") {
  // Constant amplitude, exact integer period.
  const PulseMeasures even = measure_pulses(t::pulse_train(100, 0.5, 960, 13), 100.0);
  REQUIRE(even.defined);
  CHECK(even.pulse_positions.size() == 10);
  CHECK(even.pulse_positions[0] == doctest::Approx(13.0));
  CHECK(even.jitter_local == doctest::Approx(0.0));
  CHECK(even.shimmer_local_db == doctest::Approx(0.0));

  // Periods 100, 110, 100: mean |diff| = 10, mean period = 310/3. Amplitudes
  // are read after removing the segment mean of 3/400.
  std::vector<double> x(400, 0.0);
  x[10] = 1.0;
  x[110] = 0.5;
  x[220] = 1.0;
  x[320] = 0.5;
  const PulseMeasures uneven = measure_pulses(x, 105.0);
  REQUIRE(uneven.defined);
  CHECK(uneven.jitter_local == doctest::Approx(10.0 / (310.0 / 3.0)));
  const double dc = 3.0 / 400.0;
  CHECK(uneven.shimmer_local_db == doctest::Approx(20.0 * std::log10((1.0 - dc) / (0.5 - dc))));

  CHECK_FALSE(measure_pulses(t::pulse_train(100, 0.5, 150), 100.0).defined);
}

TEST_CASE("constant-amplitude periodic signal has zero shimmer") {
  const LldSeries s = extract_llds(make_frame(t::pulse_train(160, 0.3, 16000)));
  for (double sh : s.shimmer_local_db) CHECK(sh == doctest::Approx(0.0));
}

TEST_CASE("stationary noise has far lower spectral flux than alternating tone/noise") {
  const auto noise = t::white_noise(0.1, 16000, 1);
  const auto alternating = alternating_tone_noise();
  const double ref_noise = reference_mean_flux(noise, 16000);
  const double ref_alt = reference_mean_flux(alternating, 16000);
  CHECK(ref_noise < 0.1 * ref_alt);

  const auto v_noise = apply_functionals(extract_llds(make_frame(noise)));
  const auto v_alt = apply_functionals(extract_llds(make_frame(alternating)));
  CHECK(v_noise.values[20] == doctest::Approx(ref_noise).epsilon(1e-9));
  CHECK(v_alt.values[20] == doctest::Approx(ref_alt).epsilon(1e-9));
  CHECK(v_noise.values[20] < 0.1 * v_alt.values[20]);
}

TEST_CASE("alpha ratio and Hammarberg index order low-pass above high-pass noise") {
  const auto base = t::white_noise(0.1, 16000, 3);
  const LldSeries lp = extract_llds(make_frame(t::one_pole(base, 0.9)));
  const LldSeries hp = extract_llds(make_frame(t::one_pole(base, -0.9)));
  const auto vlp = apply_functionals(lp);
  const auto vhp = apply_functionals(hp);
  // Unvoiced means, columns alphaRatioUV and hammarbergIndexUV.
  CHECK(vlp.values[76] > vhp.values[76]);
  CHECK(vlp.values[77] > vhp.values[77]);
  for (std::size_t i = 0; i < lp.count; ++i) {
    CHECK(lp.alpha_ratio[i] > hp.alpha_ratio[i]);
    CHECK(lp.hammarberg_index[i] > hp.hammarberg_index[i]);
  }
}

TEST_CASE("LPC formants of a synthetic vowel") {
  auto x = t::pulse_train(160, 1.0, 16000);
  x = resonator(resonator(resonator(x, 700, 80, 16000), 1200, 90, 16000), 2600, 120, 16000);
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  for (double& v : x) v *= 0.5 / peak;
  const auto v = apply_functionals(extract_llds(make_frame(x)));
  CHECK(v.values[40] == doctest::Approx(700.0).epsilon(0.05));
  CHECK(v.values[46] == doctest::Approx(1200.0).epsilon(0.05));
  CHECK(v.values[52] == doctest::Approx(2600.0).epsilon(0.05));
  CHECK(v.values[0] == doctest::Approx(12.0 * std::log2(100.0 / 27.5)).epsilon(0.01));
}

TEST_CASE("functional statistics") {
  const std::vector<double> constant(50, 3.25);
  CHECK(stats::mean(constant) == 3.25);
  CHECK(stats::coefficient_of_variation(constant) == 0.0);

  std::vector<double> ramp(101);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = i / 100.0;
  // Brute-force lower percentile: smallest element with at least p of the
  // series at or below it. Interpolated values may differ by one step.
  auto brute = [&](double p) {
    for (double v : ramp) {
      const auto below = std::count_if(ramp.begin(), ramp.end(), [&](double u) { return u <= v; });
      if (static_cast<double>(below) / ramp.size() >= p) return v;
    }
    return ramp.back();
  };
  for (double p : {0.2, 0.5, 0.8}) {
    CHECK(std::abs(stats::percentile(ramp, p) - p) < 1e-12);
    CHECK(std::abs(stats::percentile(ramp, p) - brute(p)) <= 0.01 + 1e-12);
  }

  CHECK(stats::mean(std::vector<double>{}) == 0.0);
  CHECK(stats::percentile(std::vector<double>{}, 0.5) == 0.0);

  // Triangle 0 -> 1 -> 0 over 2 s: one rising and one falling slope of 1/s.
  const std::vector<double> tri{0.0, 0.5, 1.0, 0.5, 0.0};
  const std::vector<double> times{0.0, 0.5, 1.0, 1.5, 2.0};
  const auto sl = stats::slopes(tri, times);
  CHECK(sl.mean_rising == doctest::Approx(1.0));
  CHECK(sl.mean_falling == doctest::Approx(1.0));
  CHECK(sl.stddev_rising == 0.0);
}

TEST_CASE("constant LLD series gives mean = constant and CV = 0") {
  LldSeries s;
  s.count = 10;
  s.hop_seconds = 0.01;
  s.voiced.assign(10, true);
  for (auto* v : {&s.f0_semitone, &s.loudness, &s.intensity, &s.spectral_flux, &s.alpha_ratio,
                  &s.hammarberg_index, &s.slope_0_500, &s.slope_500_1500, &s.hnr_db, &s.h1_h2,
                  &s.h1_a3}) {
    v->assign(10, 2.0);
  }
  for (auto& v : s.mfcc) v.assign(10, 2.0);
  for (std::size_t k = 0; k < 3; ++k) {
    s.formant_freq[k].assign(10, 2.0);
    s.formant_bandwidth[k].assign(10, 2.0);
    s.formant_amplitude[k].assign(10, 2.0);
    s.formant_valid[k].assign(10, true);
  }
  s.jitter_local.assign(10, 2.0);
  s.shimmer_local_db.assign(10, 2.0);
  const auto v = apply_functionals(s);
  CHECK(v.values[0] == 2.0);
  CHECK(v.values[1] == 0.0);
  CHECK(v.values[10] == 2.0);
  CHECK(v.values[11] == 0.0);
  CHECK(v.values[30] == 2.0);
  CHECK(v.values[31] == 0.0);
  CHECK(v.values[82] == doctest::Approx(1.0 / 0.1));  // one voiced run over 0.1 s
  CHECK(v.values[83] == doctest::Approx(0.1));
}

TEST_CASE("extract_frame_features composes framing and functionals") {
  const auto rec = t::make_recording(t::white_noise(0.05, 10 * 16000 + 5000, 9), 16000, "r10");
  const FrameFeatureMatrix m = extract_frame_features(rec);
  CHECK(m.recording_id == "r10");
  REQUIRE(m.rows.size() == 10);
  for (std::size_t i = 0; i < m.rows.size(); ++i) CHECK(m.rows[i].frame_index == i);

  const auto short_rec = t::make_recording(std::vector<double>(8000, 0.1), 16000);
  const auto empty = extract_frame_features(short_rec);
  CHECK(empty.rows.empty());
  CHECK(empty.short_recording);
}

TEST_CASE("repeated content gives identical rows and reruns are bit-identical") {
  const auto second = t::sawtooth(180.0, 0.4, 1.0, 16000);
  std::vector<double> x;
  for (int i = 0; i < 3; ++i) x.insert(x.end(), second.begin(), second.end());
  // 180 Hz divides 16 kHz evenly enough that each second starts in phase.
  const auto rec = t::make_recording(x, 16000);
  const auto a = extract_frame_features(rec);
  const auto b = extract_frame_features(rec);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.rows[0].values == a.rows[1].values);
  CHECK(a.rows[1].values == a.rows[2].values);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].values == b.rows[i].values);
}

TEST_CASE("constant gain leaves pitch features unchanged") {
  auto voice = t::pulse_train(145, 1.0, 3 * 16000);
  voice = resonator(resonator(voice, 600, 80, 16000), 1500, 100, 16000);
  const auto noise = t::white_noise(0.002, voice.size(), 5);
  for (std::size_t i = 0; i < voice.size(); ++i) voice[i] = 0.3 * voice[i] + noise[i];
  auto quiet = voice;
  for (double& v : quiet) v *= 0.25;

  const auto loud_rec = t::make_recording(voice, 16000, "loud");
  const auto quiet_rec = t::make_recording(quiet, 16000, "quiet");
  const auto raw_loud = extract_frame_features(loud_rec);
  const auto raw_quiet = extract_frame_features(quiet_rec);
  for (std::size_t r = 0; r < raw_loud.rows.size(); ++r) {
    for (std::size_t c = 0; c < 10; ++c) {
      CHECK(raw_loud.rows[r].values[c] == doctest::Approx(raw_quiet.rows[r].values[c]).epsilon(1e-6));
    }
    // Loudness and the equivalent sound level carry the gain.
    CHECK(raw_loud.rows[r].values[column::kLoudnessMean] >
          1.5 * raw_quiet.rows[r].values[column::kLoudnessMean]);
    CHECK(raw_loud.rows[r].values[column::kEquivalentSoundLevel] -
              raw_quiet.rows[r].values[column::kEquivalentSoundLevel] ==
          doctest::Approx(20.0 * std::log10(4.0)).epsilon(1e-6));
  }

  const auto norm_loud = extract_frame_features(audio::normalize_loudness(loud_rec).recording);
  const auto norm_quiet = extract_frame_features(audio::normalize_loudness(quiet_rec).recording);
  for (std::size_t r = 0; r < norm_loud.rows.size(); ++r) {
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      CHECK(norm_loud.rows[r].values[c] ==
            doctest::Approx(norm_quiet.rows[r].values[c]).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("every frame has 88 finite features for assorted content") {
  std::vector<std::vector<double>> signals;
  signals.push_back(std::vector<double>(16000, 0.0));
  signals.push_back(std::vector<double>(16000, 0.7));
  signals.push_back(t::pulse_train(16000, 1.0, 16000, 8000));
  signals.push_back(t::white_noise(1.0, 16000, 11));
  signals.push_back(t::sine(7900.0, 1.0, 1.0, 16000));
  signals.push_back(t::sine(30.0, 1.0, 1.0, 16000));
  std::vector<double> clipped = t::white_noise(5.0, 16000, 12);
  for (double& v : clipped) v = std::clamp(v, -1.0, 1.0);
  signals.push_back(clipped);
  std::vector<double> tiny = t::sawtooth(200.0, 1e-9, 1.0, 16000);
  signals.push_back(tiny);
  for (const auto& x : signals) {
    const auto v = apply_functionals(extract_llds(make_frame(x)));
    for (double value : v.values) CHECK(std::isfinite(value));
  }
}
