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

#include "adress/features/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>
#include <utility>

namespace adress::features {

namespace {

// The FFTW planner is not thread safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

RealFft::RealFft(std::size_t size) : size_(size) {
  real_ = static_cast<double*>(fftw_malloc(sizeof(double) * size_));
  complex_ = static_cast<std::complex<double>*>(
      fftw_malloc(sizeof(fftw_complex) * bins()));
  if (real_ == nullptr || complex_ == nullptr) {
    release();
    throw std::bad_alloc();
  }
  auto* c = reinterpret_cast<fftw_complex*>(complex_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(size_), real_, c, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(size_), c, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() { release(); }

RealFft::RealFft(RealFft&& other) noexcept
    : size_(std::exchange(other.size_, 0)),
      real_(std::exchange(other.real_, nullptr)),
      complex_(std::exchange(other.complex_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

RealFft& RealFft::operator=(RealFft&& other) noexcept {
  if (this != &other) {
    release();
    size_ = std::exchange(other.size_, 0);
    real_ = std::exchange(other.real_, nullptr);
    complex_ = std::exchange(other.complex_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void RealFft::release() noexcept {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  }
  forward_plan_ = nullptr;
  inverse_plan_ = nullptr;
  if (real_) fftw_free(real_);
  if (complex_) fftw_free(complex_);
  real_ = nullptr;
  complex_ = nullptr;
}

std::span<const std::complex<double>> RealFft::forward(std::span<const double> input) {
  const std::size_t n = std::min(input.size(), size_);
  std::copy_n(input.begin(), n, real_);
  std::fill(real_ + n, real_ + size_, 0.0);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  return {complex_, bins()};
}

std::span<const double> RealFft::inverse(std::span<const std::complex<double>> spectrum) {
  const std::size_t n = std::min(spectrum.size(), bins());
  std::copy_n(spectrum.begin(), n, complex_);
  std::fill(complex_ + n, complex_ + bins(), std::complex<double>{});
  // c2r destroys its input array, which is our own scratch buffer.
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  return {real_, size_};
}

}  // namespace adress::features
