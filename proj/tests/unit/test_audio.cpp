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

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "adress/audio/framing.hpp"
#include "adress/audio/loudness.hpp"
#include "adress/audio/wav.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "signals.hpp"

namespace fs = std::filesystem;
using namespace adress;
using adress::testing::make_recording;
using adress::testing::biquad_gain2;
using adress::testing::kHighpassA;
using adress::testing::kHighpassB;
using adress::testing::kShelfA;
using adress::testing::kShelfB;

namespace {

// Hand-assembled WAV so the reader is not tested against its own writer.
void write_raw_wav(const fs::path& path, std::uint16_t format, std::uint16_t channels,
                   std::uint32_t rate, std::uint16_t bits, const std::vector<unsigned char>& data) {
  std::vector<unsigned char> out;
  auto u16 = [&](std::uint16_t v) {
    out.push_back(v & 0xFF);
    out.push_back(v >> 8);
  };
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
  };
  auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  tag("RIFF");
  u32(36 + static_cast<std::uint32_t>(data.size()));
  tag("WAVE");
  tag("fmt ");
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(channels * bits / 8);
  u16(bits);
  tag("data");
  u32(static_cast<std::uint32_t>(data.size()));
  out.insert(out.end(), data.begin(), data.end());
  std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(out.data()),
                                               static_cast<std::streamsize>(out.size()));
}

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "adress_test_audio";
  fs::create_directories(dir);
  return dir / name;
}

audio::AudioErrorKind load_error_kind(const fs::path& p) {
  try {
    audio::load_audio(p);
  } catch (const audio::AudioError& e) {
    return e.kind();
  }
  FAIL("expected AudioError");
  return audio::AudioErrorKind::kMalformed;
}
}  // namespace

TEST_CASE("load_audio scales 16-bit PCM by 2^15") {
  const fs::path p = temp_file("pcm16.wav");
  std::vector<unsigned char> data;
  for (int i = 0; i < 16000; ++i) {
    data.push_back(16384 & 0xFF);
    data.push_back(16384 >> 8);
  }
  write_raw_wav(p, 1, 1, 16000, 16, data);
  const audio::Recording rec = audio::load_audio(p);
  CHECK(rec.id == "pcm16");
  CHECK(rec.sample_rate == 16000);
  REQUIRE(rec.samples.size() == 16000);
  CHECK(rec.samples[0] == doctest::Approx(0.5).epsilon(1.0 / 32768));
}

TEST_CASE("load_audio averages stereo float channels") {
  const fs::path p = temp_file("stereo.wav");
  std::vector<unsigned char> data;
  for (int i = 0; i < 100; ++i) {
    for (float v : {0.2f, 0.6f}) {
      std::uint32_t raw;
      std::memcpy(&raw, &v, 4);
      for (int b = 0; b < 4; ++b) data.push_back((raw >> (8 * b)) & 0xFF);
    }
  }
  write_raw_wav(p, 3, 2, 16000, 32, data);
  const audio::Recording rec = audio::load_audio(p);
  REQUIRE(rec.samples.size() == 100);
  CHECK(rec.samples[7] == doctest::Approx(0.4).epsilon(1e-7));
}

TEST_CASE("load_audio decodes 8, 24 and 32-bit integer PCM") {
  {
    const fs::path p = temp_file("pcm8.wav");
    write_raw_wav(p, 1, 1, 16000, 8, {192, 64, 128});
    const auto rec = audio::load_audio(p);
    CHECK(rec.samples[0] == doctest::Approx(0.5));
    CHECK(rec.samples[1] == doctest::Approx(-0.5));
    CHECK(rec.samples[2] == 0.0);
  }
  {
    const fs::path p = temp_file("pcm24.wav");
    // 0x400000 = 2^22 -> 0.5; 0xC00000 -> -0.5
    write_raw_wav(p, 1, 1, 16000, 24, {0x00, 0x00, 0x40, 0x00, 0x00, 0xC0});
    const auto rec = audio::load_audio(p);
    CHECK(rec.samples[0] == doctest::Approx(0.5));
    CHECK(rec.samples[1] == doctest::Approx(-0.5));
  }
  {
    const fs::path p = temp_file("pcm32.wav");
    write_raw_wav(p, 1, 1, 16000, 32, {0x00, 0x00, 0x00, 0x40});
    CHECK(audio::load_audio(p).samples[0] == doctest::Approx(0.5));
  }
}

TEST_CASE("load_audio reports distinct error kinds") {
  CHECK(load_error_kind(temp_file("does_not_exist.wav")) == audio::AudioErrorKind::kMissingFile);

  const fs::path empty = temp_file("empty.wav");
  write_raw_wav(empty, 1, 1, 16000, 16, {});
  CHECK(load_error_kind(empty) == audio::AudioErrorKind::kZeroLengthStream);

  const fs::path adpcm = temp_file("adpcm.wav");
  write_raw_wav(adpcm, 2, 1, 16000, 4, {1, 2, 3, 4});
  CHECK(load_error_kind(adpcm) == audio::AudioErrorKind::kUnsupportedCodec);

  const fs::path text = temp_file("text.wav");
  std::ofstream(text) << "definitely not audio";
  CHECK(load_error_kind(text) == audio::AudioErrorKind::kUnsupportedCodec);

  const fs::path low = temp_file("low_rate.wav");
  write_raw_wav(low, 1, 1, 8000, 16, {0, 0, 0, 0});
  CHECK(load_error_kind(low) == audio::AudioErrorKind::kUnsupportedSampleRate);
}

TEST_CASE("write_wav round trips through load_audio") {
  const fs::path p = temp_file("roundtrip.wav");
  const auto rec = make_recording(adress::testing::sine(300.0, 0.5, 0.25, 16000), 16000, "rt");
  audio::write_wav(p, rec, audio::WavEncoding::kFloat32);
  const auto back = audio::load_audio(p);
  REQUIRE(back.samples.size() == rec.samples.size());
  for (std::size_t i = 0; i < rec.samples.size(); i += 97) {
    CHECK(back.samples[i] == doctest::Approx(rec.samples[i]).epsilon(1e-7));
  }
  audio::write_wav(p, rec, audio::WavEncoding::kPcm16);
  const auto pcm = audio::load_audio(p);
  for (std::size_t i = 0; i < rec.samples.size(); i += 97) {
    CHECK(std::abs(pcm.samples[i] - rec.samples[i]) <= 1.0 / 32768);
  }
}

TEST_CASE("K-weighting design matches the published 48 kHz coefficients") {
  const audio::KWeighting kw = audio::k_weighting(48000);
  for (int i = 0; i < 3; ++i) {
    CHECK(kw.shelf.b[i] == doctest::Approx(kShelfB[i]).epsilon(1e-9));
    CHECK(kw.shelf.a[i] == doctest::Approx(kShelfA[i]).epsilon(1e-9));
    CHECK(kw.highpass.b[i] == doctest::Approx(kHighpassB[i]).epsilon(1e-9));
    CHECK(kw.highpass.a[i] == doctest::Approx(kHighpassA[i]).epsilon(1e-9));
  }
}

TEST_CASE("997 Hz full-scale sine reads the analytic K-weighted loudness") {
  const double gain2 = biquad_gain2(kShelfB, kShelfA, 997.0, 48000.0) *
                       biquad_gain2(kHighpassB, kHighpassA, 997.0, 48000.0);
  const double analytic = 10.0 * std::log10(0.5 * gain2) - 0.691;
  CHECK(analytic == doctest::Approx(-3.0103).epsilon(1e-4));

  const auto rec = make_recording(adress::testing::sine(997.0, 1.0, 5.0, 48000), 48000);
  const auto report = audio::measure_loudness(rec);
  CHECK(std::abs(report.integrated_lufs - analytic) < 0.1);
  CHECK(report.gating_block_count == 47);
}

TEST_CASE("measure_loudness edge cases") {
  const auto silence = make_recording(std::vector<double>(5 * 16000, 0.0), 16000);
  const auto r = audio::measure_loudness(silence);
  CHECK(std::isinf(r.integrated_lufs));
  CHECK(r.integrated_lufs < 0);
  CHECK(r.gating_block_count == 0);

  const auto too_short = make_recording(std::vector<double>(6000, 0.1), 16000);
  CHECK_THROWS_AS(audio::measure_loudness(too_short), DataError);
}

TEST_CASE("loudness is gain-equivariant") {
  const auto full = make_recording(adress::testing::sine(997.0, 1.0, 5.0, 48000), 48000);
  const auto quiet = make_recording(adress::testing::sine(997.0, 0.1, 5.0, 48000), 48000);
  const double a = audio::measure_loudness(full).integrated_lufs;
  const double b = audio::measure_loudness(quiet).integrated_lufs;
  CHECK(a - b == doctest::Approx(20.0).epsilon(1e-9));

  auto noise = adress::testing::white_noise(0.1, 3 * 16000, 7);
  const auto rec = make_recording(noise, 16000);
  for (double& v : noise) v *= 0.5;
  const auto half = make_recording(noise, 16000);
  CHECK(audio::measure_loudness(rec).integrated_lufs -
            audio::measure_loudness(half).integrated_lufs ==
        doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));
}

TEST_CASE("normalize_loudness applies the constant gain to hit the target") {
  // Scale a sine so that it measures exactly -30 LUFS.
  auto x = adress::testing::sine(440.0, 0.1, 4.0, 16000);
  const double measured = audio::measure_loudness(make_recording(x, 16000)).integrated_lufs;
  const double scale = std::pow(10.0, (-30.0 - measured) / 20.0);
  for (double& v : x) v *= scale;
  const auto at_minus_30 = make_recording(x, 16000, "quiet");

  const auto out = audio::normalize_loudness(at_minus_30, {.target_lufs = -23.0});
  CHECK(*out.report.applied_gain_db == doctest::Approx(7.0).epsilon(1e-6));
  CHECK(out.report.integrated_lufs == doctest::Approx(-30.0).epsilon(1e-6));
  CHECK(std::abs(audio::measure_loudness(out.recording).integrated_lufs + 23.0) < 0.5);

  const auto again = audio::normalize_loudness(out.recording, {.target_lufs = -23.0});
  CHECK(*again.report.applied_gain_db == 0.0);
  CHECK(again.recording.samples == out.recording.samples);
}

TEST_CASE("attenuation never clips") {
  auto x = adress::testing::sine(997.0, 1.0, 3.0, 48000);
  const double measured = audio::measure_loudness(make_recording(x, 48000)).integrated_lufs;
  const double scale = std::pow(10.0, (-1.0 - measured) / 20.0);
  // -1 LUFS needs a little over full scale; the input itself may exceed 1.
  for (double& v : x) v *= scale;
  const auto out = audio::normalize_loudness(make_recording(x, 48000), {.target_lufs = -23.0});
  CHECK(*out.report.applied_gain_db == doctest::Approx(-22.0).epsilon(1e-6));
  CHECK(out.report.clip_count == 0);
}

TEST_CASE("boost past full scale is hard-clipped and counted") {
  const auto x = make_recording(adress::testing::sine(440.0, 0.01, 2.0, 16000), 16000);
  const auto out = audio::normalize_loudness(x, {.target_lufs = 0.0});
  CHECK(out.report.clip_count > 0);
  for (double v : out.recording.samples) CHECK(std::abs(v) <= 1.0);

  const auto unclipped = audio::normalize_loudness(x, {.target_lufs = 0.0, .hard_clip = false});
  CHECK(unclipped.report.clip_count == out.report.clip_count);
}

TEST_CASE("normalize_loudness refuses silence and names the recording") {
  const auto silence = make_recording(std::vector<double>(16000, 0.0), 16000, "mute-07");
  try {
    audio::normalize_loudness(silence);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("mute-07") != std::string::npos);
  }
}

TEST_CASE("normalize then re-measure lands within 0.5 LU for random signals") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> amp(0.001, 0.5);
  std::uniform_real_distribution<double> freq(80.0, 4000.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x = trial % 2 == 0
                                ? adress::testing::white_noise(amp(rng), 32000, 100 + trial)
                                : adress::testing::sine(freq(rng), amp(rng), 2.0, 16000);
    const auto out = audio::normalize_loudness(make_recording(x, 16000));
    const double after = audio::measure_loudness(out.recording).integrated_lufs;
    CHECK(std::abs(after - audio::kDefaultTargetLufs) <= 0.5);
  }
}

TEST_CASE("frame_1s keeps whole seconds only") {
  const auto rec = make_recording(adress::testing::white_noise(0.1, 171200, 3), 16000);
  const auto seq = audio::frame_1s(rec);
  CHECK_FALSE(seq.short_recording);
  REQUIRE(seq.frames.size() == 10);
  std::vector<double> joined;
  for (std::size_t k = 0; k < seq.frames.size(); ++k) {
    CHECK(seq.frames[k].index == k);
    CHECK(seq.frames[k].samples.size() == 16000);
    joined.insert(joined.end(), seq.frames[k].samples.begin(), seq.frames[k].samples.end());
  }
  CHECK(std::equal(joined.begin(), joined.end(), rec.samples.begin()));

  CHECK(audio::frame_1s(make_recording(std::vector<double>(48000, 0.0), 16000)).frames.size() == 3);

  const auto short_seq = audio::frame_1s(make_recording(std::vector<double>(14400, 0.0), 16000));
  CHECK(short_seq.frames.empty());
  CHECK(short_seq.short_recording);
}
