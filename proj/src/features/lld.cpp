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

#include "adress/features/lld.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "adress/audio/wav.hpp"
#include "adress/common/error.hpp"
#include "adress/features/fft.hpp"

namespace adress::features {

namespace {

constexpr double kPi = std::numbers::pi;
// Reference intensity of the loudness power law.
constexpr double kIntensityReference = 1e-6;
constexpr double kLoudnessExponent = 0.3;

std::vector<double> hamming(std::size_t n) {
  std::vector<double> w(n);
  if (n == 1) return {1.0};
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / static_cast<double>(n - 1));
  }
  return w;
}

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  if (n == 1) return {1.0};
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / static_cast<double>(n - 1));
  }
  return w;
}

double to_db(double power) { return 10.0 * std::log10(std::max(power, kLogFloor)); }

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular filters on the HTK mel scale. Each filter keeps only the bin
// range where its weight is non-zero.
class MelBank {
 public:
  MelBank(std::size_t bins, int sample_rate, std::size_t fft_size, int bands,
          double low_hz, double high_hz)
      : weights_(static_cast<std::size_t>(bands)), first_(weights_.size(), 0) {
    high_hz = std::min(high_hz, sample_rate / 2.0);
    const double mel_low = hz_to_mel(low_hz);
    const double mel_high = hz_to_mel(high_hz);
    std::vector<double> edges(static_cast<std::size_t>(bands) + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      edges[i] = mel_to_hz(mel_low + (mel_high - mel_low) * i / (bands + 1.0));
    }
    const double bin_hz = static_cast<double>(sample_rate) / fft_size;
    for (std::size_t m = 0; m < weights_.size(); ++m) {
      const double lo = edges[m];
      const double centre = edges[m + 1];
      const double hi = edges[m + 2];
      for (std::size_t k = 0; k < bins; ++k) {
        const double f = k * bin_hz;
        double w = 0.0;
        if (f > lo && f <= centre) {
          w = (f - lo) / (centre - lo);
        } else if (f > centre && f < hi) {
          w = (hi - f) / (hi - centre);
        }
        if (w == 0.0) continue;
        if (weights_[m].empty()) first_[m] = k;
        weights_[m].resize(k - first_[m] + 1, 0.0);
        weights_[m].back() = w;
      }
    }
  }

  std::vector<double> log_energies(std::span<const double> power) const {
    std::vector<double> out(weights_.size());
    for (std::size_t m = 0; m < weights_.size(); ++m) {
      double e = 0.0;
      const std::vector<double>& w = weights_[m];
      for (std::size_t i = 0; i < w.size(); ++i) e += w[i] * power[first_[m] + i];
      out[m] = std::log(std::max(e, kLogFloor));
    }
    return out;
  }

 private:
  std::vector<std::vector<double>> weights_;
  std::vector<std::size_t> first_;
};

// Liftered DCT-II coefficients 1..count of the log mel energies, as a
// precomputed table.
class Cepstrum {
 public:
  Cepstrum(std::size_t bands, std::size_t count, int lifter) : table_(count) {
    const double m = static_cast<double>(bands);
    for (std::size_t i = 1; i <= count; ++i) {
      table_[i - 1].resize(bands);
      for (std::size_t j = 0; j < bands; ++j) table_[i - 1][j] = std::cos(kPi * i * (j + 0.5) / m);
    }
    scale_.resize(count);
    for (std::size_t i = 1; i <= count; ++i) {
      scale_[i - 1] = lifter > 0 ? 1.0 + 0.5 * lifter * std::sin(kPi * i / lifter) : 1.0;
    }
    norm_ = std::sqrt(2.0 / m);
  }

  double coefficient(std::size_t index, const std::vector<double>& log_mel) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < log_mel.size(); ++j) acc += log_mel[j] * table_[index][j];
    return acc * norm_ * scale_[index];
  }

 private:
  std::vector<std::vector<double>> table_;
  std::vector<double> scale_;
  double norm_ = 1.0;
};

double band_sum(std::span<const double> power, double bin_hz, double lo, double hi) {
  double s = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    const double f = k * bin_hz;
    if (f >= lo && f <= hi) s += power[k];
  }
  return s;
}

double band_peak(std::span<const double> power, double bin_hz, double lo, double hi) {
  double p = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    const double f = k * bin_hz;
    if (f >= lo && f <= hi) p = std::max(p, power[k]);
  }
  return p;
}

// Peak power within +-halfwidth of freq, always covering at least the nearest bin.
double peak_near(std::span<const double> power, double bin_hz, double freq,
                 double halfwidth) {
  halfwidth = std::max(halfwidth, bin_hz);
  return band_peak(power, bin_hz, freq - halfwidth, freq + halfwidth);
}

// Least-squares slope of level (dB) against log2 frequency, i.e. dB/octave,
// over bins with lo < f <= hi and f > 0.
double spectral_slope(std::span<const double> power, double bin_hz, double lo, double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 1; k < power.size(); ++k) {
    const double f = k * bin_hz;
    if (f < lo || f > hi) continue;
    const double x = std::log2(f);
    const double y = to_db(power[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * sxx - sx * sx;
  return denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

double parabolic_offset(double left, double centre, double right) {
  const double denom = left - 2.0 * centre + right;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

class PitchAnalyzer {
 public:
  PitchAnalyzer(std::size_t length, int sample_rate, const LldConfig& config)
      : length_(length),
        sample_rate_(sample_rate),
        config_(config),
        window_(hann(length)),
        fft_(next_pow2(2 * length)),
        buffer_(length),
        spectrum_(fft_.bins()) {
    // Normalized autocorrelation of the window itself.
    auto w = fft_.forward(window_);
    for (std::size_t k = 0; k < w.size(); ++k) spectrum_[k] = std::norm(w[k]);
    auto acf = fft_.inverse(spectrum_);
    window_acf_.assign(acf.begin(), acf.begin() + static_cast<std::ptrdiff_t>(length));
    const double r0 = window_acf_[0];
    for (double& v : window_acf_) v /= r0;
  }

  PitchEstimate analyze(std::span<const double> segment, double frame_peak) {
    PitchEstimate est;
    if (segment.size() != length_) return est;
    const double mean =
        std::accumulate(segment.begin(), segment.end(), 0.0) / static_cast<double>(length_);
    double local_peak = 0.0;
    for (double s : segment) local_peak = std::max(local_peak, std::abs(s - mean));
    if (frame_peak <= 0.0 || local_peak < 1e-7 ||
        local_peak < config_.silence_threshold * frame_peak) {
      return est;
    }
    for (std::size_t i = 0; i < length_; ++i) buffer_[i] = (segment[i] - mean) * window_[i];
    auto x = fft_.forward(buffer_);
    for (std::size_t k = 0; k < x.size(); ++k) spectrum_[k] = std::norm(x[k]);
    auto acf = fft_.inverse(spectrum_);
    const double r0 = acf[0];
    if (!(r0 > 0.0)) return est;

    const double fs = sample_rate_;
    const auto min_lag = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::floor(fs / config_.f0_max_hz)));
    const auto max_lag = std::min<std::size_t>(
        static_cast<std::size_t>(std::ceil(fs / config_.f0_min_hz)), length_ / 2);
    if (max_lag <= min_lag) return est;

    auto norm_at = [&](std::size_t lag) {
      const double w = window_acf_[lag];
      return w > 1e-9 ? (acf[lag] / r0) / w : 0.0;
    };

    // Local maxima of the normalized autocorrelation, refined by parabolic
    // interpolation. The shortest lag within candidate_ratio of the strongest
    // peak wins, which suppresses picking a multiple of the true period.
    struct Candidate {
      double lag;
      double peak;
    };
    std::vector<Candidate> candidates;
    double strongest = 0.0;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
      const double left = norm_at(lag - 1);
      const double centre = norm_at(lag);
      const double right = norm_at(lag + 1);
      if (!(centre > left && centre >= right)) continue;
      const double delta = parabolic_offset(left, centre, right);
      const double peak = centre - 0.25 * (left - right) * delta;
      candidates.push_back({static_cast<double>(lag) + delta, peak});
      strongest = std::max(strongest, peak);
    }
    if (candidates.empty() || !(strongest > 0.0)) return est;
    for (const Candidate& c : candidates) {
      if (c.peak >= config_.candidate_ratio * strongest) {
        est.period_samples = c.lag;
        est.correlation = c.peak;
        break;
      }
    }
    est.f0_hz = fs / est.period_samples;
    est.voiced = est.correlation >= config_.voicing_threshold;
    if (!est.voiced) est.f0_hz = 0.0;
    return est;
  }

 private:
  std::size_t length_;
  int sample_rate_;
  LldConfig config_;
  std::vector<double> window_;
  std::vector<double> window_acf_;
  RealFft fft_;
  std::vector<double> buffer_;
  std::vector<std::complex<double>> spectrum_;
};

// Roots of the companion matrix via its real Schur form. The companion matrix
// is already upper Hessenberg, so the reduction step is skipped.
std::vector<std::complex<double>> schur_roots(const std::vector<double>& monic) {
  const int order = static_cast<int>(monic.size()) - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(order, order);
  for (int j = 0; j < order; ++j) companion(0, j) = -monic[static_cast<std::size_t>(j + 1)];
  for (int i = 1; i < order; ++i) companion(i, i - 1) = 1.0;
  Eigen::RealSchur<Eigen::MatrixXd> schur(order);
  schur.computeFromHessenberg(companion, Eigen::MatrixXd::Identity(order, order), false);
  if (schur.info() != Eigen::Success) return {};
  const Eigen::MatrixXd& t = schur.matrixT();
  std::vector<std::complex<double>> roots;
  for (int i = 0; i < order; ++i) {
    if (i + 1 < order && t(i + 1, i) != 0.0) {
      // 2x2 block: (a+d)/2 +- sqrt(((a-d)/2)^2 + bc)
      const double p = 0.5 * (t(i, i) - t(i + 1, i + 1));
      const double disc = p * p + t(i, i + 1) * t(i + 1, i);
      const double re = t(i + 1, i + 1) + p;
      if (disc < 0.0) {
        roots.emplace_back(re, std::sqrt(-disc));
        roots.emplace_back(re, -std::sqrt(-disc));
      } else {
        roots.emplace_back(re + std::sqrt(disc), 0.0);
        roots.emplace_back(re - std::sqrt(disc), 0.0);
      }
      ++i;
    } else {
      roots.emplace_back(t(i, i), 0.0);
    }
  }
  return roots;
}

// Roots of z^p + c1 z^(p-1) + ... + cp (monic[0] == 1) by Aberth-Ehrlich
// iteration, falling back to the Schur route if it fails to converge.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& monic) {
  const std::size_t order = monic.size() - 1;
  if (order == 0) return {};
  std::vector<std::complex<double>> z(order);
  for (std::size_t k = 0; k < order; ++k) {
    z[k] = std::polar(0.9, 2.0 * kPi * k / static_cast<double>(order) + 0.4);
  }
  // 1/d without the overflow-guarded libgcc division; |d| is never tiny
  // here because distinct iterates are kept apart by the repulsion term.
  auto inverse = [](std::complex<double> d) {
    const double m = d.real() * d.real() + d.imag() * d.imag();
    return std::complex<double>(d.real() / m, -d.imag() / m);
  };
  constexpr int kMaxIterations = 100;
  std::vector<bool> done(order, false);
  std::size_t remaining = order;
  for (int iter = 0; iter < kMaxIterations && remaining > 0; ++iter) {
    for (std::size_t k = 0; k < order; ++k) {
      if (done[k]) continue;
      std::complex<double> value = 1.0;
      std::complex<double> slope = 0.0;
      for (std::size_t j = 1; j <= order; ++j) {
        slope = slope * z[k] + value;
        value = value * z[k] + monic[j];
      }
      if (std::norm(slope) == 0.0) continue;
      const std::complex<double> ratio = value * inverse(slope);
      std::complex<double> repulsion = 0.0;
      for (std::size_t j = 0; j < order; ++j) {
        if (j != k) repulsion += inverse(z[k] - z[j]);
      }
      const std::complex<double> step = ratio * inverse(1.0 - ratio * repulsion);
      z[k] -= step;
      if (!std::isfinite(z[k].real()) || !std::isfinite(z[k].imag())) return schur_roots(monic);
      if (std::abs(step) < 1e-13) {
        done[k] = true;
        --remaining;
      }
    }
  }
  if (remaining == 0) return z;
  return schur_roots(monic);
}

std::vector<Formant> formants_from_segment(std::span<const double> segment, int sample_rate,
                                           const std::vector<double>& window,
                                           const LldConfig& config) {
  const int order = 2 + sample_rate / 1000;
  const std::size_t n = segment.size();
  if (n <= static_cast<std::size_t>(order)) return {};

  std::vector<double> x(n);
  x[0] = segment[0] * window[0];
  for (std::size_t i = 1; i < n; ++i) {
    x[i] = (segment[i] - config.preemphasis * segment[i - 1]) * window[i];
  }

  std::vector<double> r(static_cast<std::size_t>(order) + 1, 0.0);
  for (std::size_t lag = 0; lag < r.size(); ++lag) {
    for (std::size_t i = 0; i + lag < n; ++i) r[lag] += x[i] * x[i + lag];
  }
  if (!(r[0] > 1e-20)) return {};
  r[0] *= 1.0 + 1e-9;

  // Levinson-Durbin recursion for A(z) = 1 + a1 z^-1 + ... + ap z^-p.
  std::vector<double> a(r.size(), 0.0);
  std::vector<double> prev(r.size(), 0.0);
  a[0] = 1.0;
  double err = r[0];
  for (int i = 1; i <= order; ++i) {
    double acc = r[static_cast<std::size_t>(i)];
    for (int j = 1; j < i; ++j) acc += a[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(i - j)];
    const double k = -acc / err;
    prev = a;
    for (int j = 1; j < i; ++j) {
      a[static_cast<std::size_t>(j)] = prev[static_cast<std::size_t>(j)] +
                                       k * prev[static_cast<std::size_t>(i - j)];
    }
    a[static_cast<std::size_t>(i)] = k;
    err *= 1.0 - k * k;
    if (!(err > 0.0)) return {};
  }

  std::vector<std::complex<double>> roots = polynomial_roots(a);
  const double fs = sample_rate;
  const double upper = std::min(config.max_formant_hz, fs / 2.0 - 50.0);
  std::vector<Formant> out;
  for (const std::complex<double>& z : roots) {
    if (!(z.imag() > 1e-9) || !std::isfinite(z.real())) continue;
    const double radius = std::abs(z);
    if (!(radius > 0.0 && radius < 1.0)) continue;
    Formant f;
    f.frequency_hz = std::atan2(z.imag(), z.real()) * fs / (2.0 * kPi);
    f.bandwidth_hz = -std::log(radius) * fs / kPi;
    if (f.frequency_hz > 90.0 && f.frequency_hz < upper &&
        f.bandwidth_hz < config.max_formant_bandwidth_hz) {
      out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Formant& l, const Formant& r) { return l.frequency_hz < r.frequency_hz; });
  return out;
}

std::size_t samples_for(double ms, int sample_rate) {
  return static_cast<std::size_t>(std::lround(ms * 1e-3 * sample_rate));
}

// Windows, FFT plans and filter tables depend only on the sample rate, the
// window lengths and the config. Each thread keeps the last set it built.
struct FrameSetup {
  FrameSetup(int sr, std::size_t win, std::size_t pitch_win, const LldConfig& c)
      : sample_rate(sr),
        window_length(win),
        pitch_length(pitch_win),
        config(c),
        window(hamming(win)),
        fft(next_pow2(win)),
        mel(fft.bins(), sr, fft.size(), c.mel_bands, c.mel_low_hz, c.mel_high_hz),
        cepstrum(static_cast<std::size_t>(c.mel_bands), std::tuple_size_v<decltype(LldSeries::mfcc)>,
                 c.cepstral_lifter),
        pitch(pitch_win, sr, c) {
    for (double w : window) window_energy += w * w;
  }

  int sample_rate;
  std::size_t window_length;
  std::size_t pitch_length;
  LldConfig config;
  std::vector<double> window;
  double window_energy = 0.0;
  RealFft fft;
  MelBank mel;
  Cepstrum cepstrum;
  PitchAnalyzer pitch;
};

FrameSetup& frame_setup(int sr, std::size_t win, std::size_t pitch_win, const LldConfig& config) {
  thread_local std::unique_ptr<FrameSetup> cached;
  if (!cached || cached->sample_rate != sr || cached->window_length != win ||
      cached->pitch_length != pitch_win || !(cached->config == config)) {
    cached = std::make_unique<FrameSetup>(sr, win, pitch_win, config);
  }
  return *cached;
}

}  // namespace

double LldSeries::voiced_fraction() const {
  if (count == 0) return 0.0;
  return static_cast<double>(std::count(voiced.begin(), voiced.end(), true)) / count;
}

std::size_t subwindow_count(std::size_t length, std::size_t window, std::size_t hop) {
  if (window == 0 || hop == 0 || length < window) return 0;
  return (length - window) / hop + 1;
}

PulseMeasures measure_pulses(const std::vector<double>& segment, double period_samples) {
  PulseMeasures out;
  const std::size_t n = segment.size();
  if (!(period_samples >= 2.0) || n < 3) return out;

  const double mean = std::accumulate(segment.begin(), segment.end(), 0.0) / n;
  std::vector<double> x(n);
  double hi = -1e300, lo = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = segment[i] - mean;
    hi = std::max(hi, x[i]);
    lo = std::min(lo, x[i]);
  }
  if (-lo > hi) {
    for (double& v : x) v = -v;
  }

  auto argmax = [&](std::size_t first, std::size_t last) {
    std::size_t best = first;
    for (std::size_t i = first + 1; i <= last; ++i) {
      if (x[i] > x[best]) best = i;
    }
    return best;
  };
  auto record = [&](std::size_t i) {
    double pos = static_cast<double>(i);
    double amp = x[i];
    if (i > 0 && i + 1 < n) {
      const double delta = parabolic_offset(x[i - 1], x[i], x[i + 1]);
      pos += delta;
      amp = x[i] - 0.25 * (x[i - 1] - x[i + 1]) * delta;
    }
    out.pulse_positions.push_back(pos);
    out.pulse_amplitudes.push_back(amp);
  };

  const auto first_end =
      std::min(n - 1, static_cast<std::size_t>(std::ceil(period_samples)) - 1);
  std::size_t prev = argmax(0, first_end);
  record(prev);
  const auto near = static_cast<std::size_t>(std::lround(0.8 * period_samples));
  const auto far = static_cast<std::size_t>(std::lround(1.2 * period_samples));
  while (prev + far < n) {
    prev = argmax(prev + near, prev + far);
    record(prev);
  }

  const std::size_t pulses = out.pulse_positions.size();
  if (pulses < 3) return out;
  for (double a : out.pulse_amplitudes) {
    if (!(a > 0.0)) return out;
  }

  std::vector<double> periods(pulses - 1);
  for (std::size_t i = 0; i + 1 < pulses; ++i) {
    periods[i] = out.pulse_positions[i + 1] - out.pulse_positions[i];
  }
  const double mean_period =
      std::accumulate(periods.begin(), periods.end(), 0.0) / periods.size();
  double period_diff = 0.0;
  for (std::size_t i = 1; i < periods.size(); ++i) {
    period_diff += std::abs(periods[i] - periods[i - 1]);
  }
  out.jitter_local = (period_diff / (periods.size() - 1)) / mean_period;

  double amp_diff = 0.0;
  for (std::size_t i = 0; i + 1 < pulses; ++i) {
    amp_diff += std::abs(20.0 * std::log10(out.pulse_amplitudes[i + 1] / out.pulse_amplitudes[i]));
  }
  out.shimmer_local_db = amp_diff / (pulses - 1);
  out.defined = true;
  return out;
}

PitchEstimate estimate_pitch(const std::vector<double>& segment, int sample_rate,
                             double frame_peak, const LldConfig& config) {
  PitchAnalyzer analyzer(segment.size(), sample_rate, config);
  return analyzer.analyze(segment, frame_peak);
}

std::vector<Formant> lpc_formants(const std::vector<double>& segment, int sample_rate,
                                  const LldConfig& config) {
  return formants_from_segment(segment, sample_rate, hamming(segment.size()), config);
}

LldSeries extract_llds(const audio::FrameSlice& frame, const LldConfig& config) {
  const int sr = frame.sample_rate;
  if (sr < audio::kMinSampleRate) {
    throw DataError(frame.recording_id + ": sample rate " + std::to_string(sr) +
                    " Hz below the " + std::to_string(audio::kMinSampleRate) + " Hz minimum");
  }
  const std::size_t n = frame.samples.size();
  const std::size_t win = samples_for(config.window_ms, sr);
  const std::size_t hop = samples_for(config.hop_ms, sr);
  const std::size_t pitch_win = std::min(n, std::max(win, samples_for(config.pitch_window_ms, sr)));
  const std::size_t count = subwindow_count(n, win, hop);

  LldSeries s;
  s.count = count;
  s.hop_seconds = static_cast<double>(hop) / sr;
  s.voiced.assign(count, false);
  for (auto* v : {&s.f0_semitone, &s.loudness, &s.intensity, &s.spectral_flux, &s.alpha_ratio,
                  &s.hammarberg_index, &s.slope_0_500, &s.slope_500_1500, &s.hnr_db, &s.h1_h2,
                  &s.h1_a3}) {
    v->assign(count, 0.0);
  }
  for (auto& v : s.mfcc) v.assign(count, 0.0);
  for (std::size_t k = 0; k < 3; ++k) {
    s.formant_freq[k].assign(count, 0.0);
    s.formant_bandwidth[k].assign(count, 0.0);
    s.formant_amplitude[k].assign(count, 0.0);
    s.formant_valid[k].assign(count, false);
  }
  if (count == 0) return s;

  FrameSetup& setup = frame_setup(sr, win, pitch_win, config);
  const std::vector<double>& window = setup.window;
  const double window_energy = setup.window_energy;
  RealFft& fft = setup.fft;
  const double bin_hz = static_cast<double>(sr) / fft.size();
  const MelBank& mel = setup.mel;
  PitchAnalyzer& pitch = setup.pitch;

  double frame_peak = 0.0;
  for (double v : frame.samples) frame_peak = std::max(frame_peak, std::abs(v));

  std::vector<double> buffer(win);
  std::vector<double> power(fft.bins());
  std::vector<double> norm_mag(fft.bins());
  std::vector<double> prev_norm_mag(fft.bins(), 0.0);
  std::vector<double> pitch_segment(pitch_win);

  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t start = t * hop;
    const std::span<const double> seg(frame.samples.data() + start, win);

    double energy = 0.0;
    for (std::size_t i = 0; i < win; ++i) {
      buffer[i] = seg[i] * window[i];
      energy += buffer[i] * buffer[i];
    }
    const double intensity = energy / window_energy;
    s.intensity[t] = intensity;
    s.loudness[t] = std::pow(intensity / kIntensityReference, kLoudnessExponent);

    auto spec = fft.forward(buffer);
    double mag_sum = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
      power[k] = std::norm(spec[k]);
      norm_mag[k] = std::sqrt(power[k]);
      mag_sum += norm_mag[k];
    }
    if (mag_sum > 0.0) {
      for (double& m : norm_mag) m /= mag_sum;
    }
    if (t > 0) {
      double flux = 0.0;
      for (std::size_t k = 0; k < norm_mag.size(); ++k) {
        const double d = norm_mag[k] - prev_norm_mag[k];
        flux += d * d;
      }
      s.spectral_flux[t] = flux;
    }
    prev_norm_mag.swap(norm_mag);

    const std::vector<double> log_mel = mel.log_energies(power);
    for (std::size_t i = 0; i < s.mfcc.size(); ++i) s.mfcc[i][t] = setup.cepstrum.coefficient(i, log_mel);

    s.alpha_ratio[t] = to_db(band_sum(power, bin_hz, 50.0, 1000.0)) -
                       to_db(band_sum(power, bin_hz, 1000.0, 5000.0));
    s.hammarberg_index[t] = to_db(band_peak(power, bin_hz, 0.0, 2000.0)) -
                            to_db(band_peak(power, bin_hz, 2000.0, 5000.0));
    s.slope_0_500[t] = spectral_slope(power, bin_hz, 0.0, 500.0);
    s.slope_500_1500[t] = spectral_slope(power, bin_hz, 500.0, 1500.0);

    // Pitch window centred on the sub-window, shifted to stay inside the frame.
    const std::size_t centre = start + win / 2;
    const std::size_t pitch_start =
        std::min(n - pitch_win, centre > pitch_win / 2 ? centre - pitch_win / 2 : 0);
    std::copy_n(frame.samples.begin() + static_cast<std::ptrdiff_t>(pitch_start), pitch_win,
                pitch_segment.begin());
    const PitchEstimate est = pitch.analyze(pitch_segment, frame_peak);
    if (!est.voiced) continue;

    s.voiced[t] = true;
    s.f0_semitone[t] = 12.0 * std::log2(est.f0_hz / kF0ReferenceHz);
    const double r = std::clamp(est.correlation, 1e-5, 1.0 - 1e-5);
    s.hnr_db[t] = 10.0 * std::log10(r / (1.0 - r));

    const PulseMeasures pulses = measure_pulses(pitch_segment, est.period_samples);
    if (pulses.defined) {
      s.jitter_local.push_back(pulses.jitter_local);
      s.shimmer_local_db.push_back(pulses.shimmer_local_db);
    }

    const double f0 = est.f0_hz;
    const double h1 = to_db(peak_near(power, bin_hz, f0, 0.25 * f0));
    const double h2 = to_db(peak_near(power, bin_hz, 2.0 * f0, 0.25 * f0));
    s.h1_h2[t] = h1 - h2;

    const std::vector<Formant> formants = formants_from_segment(seg, sr, window, config);
    for (std::size_t k = 0; k < 3 && k < formants.size(); ++k) {
      s.formant_valid[k][t] = true;
      s.formant_freq[k][t] = formants[k].frequency_hz;
      s.formant_bandwidth[k][t] = formants[k].bandwidth_hz;
      s.formant_amplitude[k][t] =
          to_db(peak_near(power, bin_hz, formants[k].frequency_hz, 0.5 * f0)) - h1;
    }
    if (formants.size() >= 3) {
      s.h1_a3[t] = h1 - to_db(peak_near(power, bin_hz, formants[2].frequency_hz, 0.5 * f0));
    }
  }
  return s;
}

}  // namespace adress::features
