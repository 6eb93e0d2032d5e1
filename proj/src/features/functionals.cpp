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

#include "adress/features/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace adress::features {

namespace stats {

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

double coefficient_of_variation(std::span<const double> x) {
  const double m = mean(x);
  if (m == 0.0) return 0.0;
  return stddev(x) / std::abs(m);
}

double percentile(std::span<const double> x, double p) {
  if (x.empty()) return 0.0;
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SlopeStats slopes(std::span<const double> values, std::span<const double> times) {
  SlopeStats out;
  const std::size_t n = values.size();
  if (n < 2 || times.size() != n) return out;

  std::vector<std::size_t> turns{0};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const bool peak = values[i] > values[i - 1] && values[i] >= values[i + 1];
    const bool valley = values[i] < values[i - 1] && values[i] <= values[i + 1];
    if (peak || valley) turns.push_back(i);
  }
  turns.push_back(n - 1);

  std::vector<double> rising;
  std::vector<double> falling;
  for (std::size_t j = 0; j + 1 < turns.size(); ++j) {
    const std::size_t a = turns[j];
    const std::size_t b = turns[j + 1];
    const double dt = times[b] - times[a];
    const double dv = values[b] - values[a];
    if (!(dt > 0.0) || dv == 0.0) continue;
    (dv > 0.0 ? rising : falling).push_back(std::abs(dv) / dt);
  }
  out.mean_rising = mean(rising);
  out.stddev_rising = stddev(rising);
  out.mean_falling = mean(falling);
  out.stddev_falling = stddev(falling);
  return out;
}

}  // namespace stats

namespace {

constexpr double kPeakRise = 1.1;

class Writer {
 public:
  explicit Writer(FrameFeatureVector& out) : out_(out) {}

  void put(double v) { out_.values.at(next_++) = v; }

  void mean_cv(std::span<const double> x) {
    put(stats::mean(x));
    put(stats::coefficient_of_variation(x));
  }

  // mean, CV, percentiles 20/50/80, 20-80 range, rising/falling slopes.
  void full_set(std::span<const double> x, std::span<const double> times) {
    mean_cv(x);
    const double p20 = stats::percentile(x, 0.2);
    const double p50 = stats::percentile(x, 0.5);
    const double p80 = stats::percentile(x, 0.8);
    put(p20);
    put(p50);
    put(p80);
    put(p80 - p20);
    const stats::SlopeStats s = stats::slopes(x, times);
    put(s.mean_rising);
    put(s.stddev_rising);
    put(s.mean_falling);
    put(s.stddev_falling);
  }

  std::size_t written() const { return next_; }

 private:
  FrameFeatureVector& out_;
  std::size_t next_ = 0;
};

std::vector<double> select(const std::vector<double>& x, const std::vector<bool>& mask,
                           bool want = true) {
  std::vector<double> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (mask[i] == want) out.push_back(x[i]);
  }
  return out;
}

std::vector<bool> both(const std::vector<bool>& a, const std::vector<bool>& b) {
  std::vector<bool> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

// Lengths in seconds of maximal runs where mask == want.
std::vector<double> run_lengths(const std::vector<bool>& mask, bool want, double hop) {
  std::vector<double> runs;
  std::size_t len = 0;
  for (bool v : mask) {
    if (v == want) {
      ++len;
    } else if (len > 0) {
      runs.push_back(len * hop);
      len = 0;
    }
  }
  if (len > 0) runs.push_back(len * hop);
  return runs;
}

}  // namespace

FrameFeatureVector apply_functionals(const LldSeries& llds) {
  FrameFeatureVector out;
  out.voiced_fraction = llds.voiced_fraction();
  Writer w(out);
  const std::vector<bool>& voiced = llds.voiced;

  std::vector<double> times(llds.count);
  for (std::size_t i = 0; i < llds.count; ++i) times[i] = i * llds.hop_seconds;

  w.full_set(select(llds.f0_semitone, voiced), select(times, voiced));
  w.full_set(llds.loudness, times);
  w.mean_cv(llds.spectral_flux);
  for (const auto& c : llds.mfcc) w.mean_cv(c);
  w.mean_cv(llds.jitter_local);
  w.mean_cv(llds.shimmer_local_db);
  w.mean_cv(select(llds.hnr_db, voiced));
  w.mean_cv(select(llds.h1_h2, voiced));
  w.mean_cv(select(llds.h1_a3, both(voiced, llds.formant_valid[2])));
  for (std::size_t k = 0; k < 3; ++k) {
    const std::vector<bool> mask = both(voiced, llds.formant_valid[k]);
    w.mean_cv(select(llds.formant_freq[k], mask));
    w.mean_cv(select(llds.formant_bandwidth[k], mask));
    w.mean_cv(select(llds.formant_amplitude[k], mask));
  }

  w.mean_cv(select(llds.alpha_ratio, voiced));
  w.mean_cv(select(llds.hammarberg_index, voiced));
  w.mean_cv(select(llds.slope_0_500, voiced));
  w.mean_cv(select(llds.slope_500_1500, voiced));
  w.mean_cv(select(llds.spectral_flux, voiced));
  for (const auto& c : llds.mfcc) w.mean_cv(select(c, voiced));

  w.put(stats::mean(select(llds.alpha_ratio, voiced, false)));
  w.put(stats::mean(select(llds.hammarberg_index, voiced, false)));
  w.put(stats::mean(select(llds.slope_0_500, voiced, false)));
  w.put(stats::mean(select(llds.slope_500_1500, voiced, false)));
  w.put(stats::mean(select(llds.spectral_flux, voiced, false)));

  const double span_seconds = llds.count * llds.hop_seconds;
  // A loudness peak is a local maximum at least kPeakRise above the lowest
  // value since the previous counted peak.
  std::size_t peaks = 0;
  double valley = llds.count > 0 ? llds.loudness[0] : 0.0;
  for (std::size_t i = 1; i + 1 < llds.count; ++i) {
    const double v = llds.loudness[i];
    valley = std::min(valley, v);
    if (v > llds.loudness[i - 1] && v >= llds.loudness[i + 1] && v > kPeakRise * valley &&
        v > 0.0) {
      ++peaks;
      valley = v;
    }
  }
  const std::vector<double> voiced_runs = run_lengths(voiced, true, llds.hop_seconds);
  const std::vector<double> unvoiced_runs = run_lengths(voiced, false, llds.hop_seconds);
  w.put(span_seconds > 0.0 ? peaks / span_seconds : 0.0);
  w.put(span_seconds > 0.0 ? voiced_runs.size() / span_seconds : 0.0);
  w.put(stats::mean(voiced_runs));
  w.put(stats::stddev(voiced_runs));
  w.put(stats::mean(unvoiced_runs));
  w.put(stats::stddev(unvoiced_runs));

  w.put(10.0 * std::log10(std::max(stats::mean(llds.intensity), kLogFloor)));
  if (w.written() != kFeatureCount) {
    throw std::logic_error("functional layout out of sync with kFeatureNames");
  }
  return out;
}

}  // namespace adress::features
