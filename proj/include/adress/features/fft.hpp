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

#ifndef ADRESS_FEATURES_FFT_HPP_
#define ADRESS_FEATURES_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>

namespace adress::features {

// Real-input FFT of fixed size backed by FFTW. Each instance owns its buffers
// and plans, so separate instances may be used from separate threads. Plan
// creation is serialized internally.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&& other) noexcept;
  RealFft& operator=(RealFft&& other) noexcept;

  std::size_t size() const noexcept { return size_; }
  std::size_t bins() const noexcept { return size_ / 2 + 1; }

  // Transforms `input` zero-padded (or truncated) to size(). The returned view
  // stays valid until the next call on this instance.
  std::span<const std::complex<double>> forward(std::span<const double> input);

  // Unnormalized inverse of a half spectrum with bins() entries.
  std::span<const double> inverse(std::span<const std::complex<double>> spectrum);

 private:
  void release() noexcept;

  std::size_t size_ = 0;
  double* real_ = nullptr;
  std::complex<double>* complex_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

std::size_t next_pow2(std::size_t n);

}  // namespace adress::features

#endif  // ADRESS_FEATURES_FFT_HPP_
