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

#ifndef ADRESS_FEATURES_LLD_HPP_
#define ADRESS_FEATURES_LLD_HPP_

#include <array>
#include <cstddef>
#include <vector>

#include "adress/audio/recording.hpp"

namespace adress::features {

inline constexpr double kLogFloor = 1e-10;
inline constexpr double kF0ReferenceHz = 27.5;

struct LldConfig {
  double window_ms = 25.0;
  double hop_ms = 10.0;
  // Pitch, jitter and shimmer look at a longer window centred on each
  // sub-window so that the lowest F0 still spans more than two periods.
  double pitch_window_ms = 60.0;
  double f0_min_hz = 55.0;
  double f0_max_hz = 1000.0;
  double voicing_threshold = 0.45;
  // Sub-windows whose peak is below this fraction of the frame peak are
  // unvoiced regardless of periodicity.
  double silence_threshold = 0.03;
  // Among autocorrelation peaks, the shortest lag reaching this fraction of
  // the strongest peak is taken as the period.
  double candidate_ratio = 0.9;
  int mel_bands = 26;
  double mel_low_hz = 20.0;
  double mel_high_hz = 8000.0;
  int cepstral_lifter = 22;
  double preemphasis = 0.97;
  double max_formant_bandwidth_hz = 500.0;
  double max_formant_hz = 5500.0;

  bool operator==(const LldConfig&) const = default;
};

// Per-sub-window descriptor trajectories for one frame.
//
// Every member vector has `count` entries except jitter_local and
// shimmer_local_db, which are compact: they hold one value per voiced
// sub-window with at least three consecutive pitch pulses, and are empty for
// unvoiced frames. Voiced-only descriptors hold 0 where the sub-window is
// unvoiced; formant descriptors hold 0 where formant_valid is false.
struct LldSeries {
  std::size_t count = 0;
  double hop_seconds = 0.0;
  std::vector<bool> voiced;

  std::vector<double> f0_semitone;
  std::vector<double> loudness;
  std::vector<double> intensity;  // windowed mean square, feeds the Leq
  std::vector<double> spectral_flux;
  std::array<std::vector<double>, 4> mfcc;
  std::vector<double> alpha_ratio;
  std::vector<double> hammarberg_index;
  std::vector<double> slope_0_500;
  std::vector<double> slope_500_1500;
  std::vector<double> hnr_db;
  std::vector<double> h1_h2;
  std::vector<double> h1_a3;
  std::array<std::vector<double>, 3> formant_freq;
  std::array<std::vector<double>, 3> formant_bandwidth;
  std::array<std::vector<double>, 3> formant_amplitude;
  std::array<std::vector<bool>, 3> formant_valid;

  std::vector<double> jitter_local;
  std::vector<double> shimmer_local_db;

  double voiced_fraction() const;
};

// Number of sub-windows of `window` samples at `hop` spacing within `length`.
std::size_t subwindow_count(std::size_t length, std::size_t window, std::size_t hop);

// Computes all descriptors for a one-second frame. Requires a sample rate of
// at least audio::kMinSampleRate; degenerate content (silence, DC, clicks)
// yields sentinel values rather than errors.
LldSeries extract_llds(const audio::FrameSlice& frame, const LldConfig& config = {});

// Pulse-level perturbation measures on one analysis segment given its period
// estimate in samples. Exposed for testing.
struct PulseMeasures {
  std::vector<double> pulse_positions;
  std::vector<double> pulse_amplitudes;
  // Absent when fewer than three pulses were found.
  bool defined = false;
  double jitter_local = 0.0;
  double shimmer_local_db = 0.0;
};
PulseMeasures measure_pulses(const std::vector<double>& segment, double period_samples);

struct PitchEstimate {
  bool voiced = false;
  double f0_hz = 0.0;
  double period_samples = 0.0;
  double correlation = 0.0;  // normalized autocorrelation at the chosen lag
};

// Autocorrelation pitch estimate over a Hann-windowed segment, normalized by
// the window's own autocorrelation.
PitchEstimate estimate_pitch(const std::vector<double>& segment, int sample_rate,
                             double frame_peak, const LldConfig& config);

// LPC formant candidates (frequency, bandwidth) in Hz sorted by frequency.
struct Formant {
  double frequency_hz = 0.0;
  double bandwidth_hz = 0.0;
};
std::vector<Formant> lpc_formants(const std::vector<double>& segment, int sample_rate,
                                  const LldConfig& config);

}  // namespace adress::features

#endif  // ADRESS_FEATURES_LLD_HPP_
