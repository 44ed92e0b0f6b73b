// Copyright 2026 The lexnoise Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXNOISE_FFT_HPP_
#define LEXNOISE_FFT_HPP_

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "lexnoise/error.hpp"

namespace lexnoise::fft {

// In-place iterative radix-2 FFT. Size must be a power of two.
inline void transform(std::span<std::complex<double>> data) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) throw Error("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = std::polar(1.0, angle * static_cast<double>(k));
        const auto u = data[start + k];
        const auto v = data[start + k + len / 2] * w;
        data[start + k] = u + v;
        data[start + k + len / 2] = u - v;
      }
    }
  }
}

// |X[k]|^2 for k = 0 .. size/2 of a zero-padded real frame.
inline std::vector<double> power_spectrum(std::span<const double> frame, std::size_t size) {
  std::vector<std::complex<double>> buf(size);
  for (std::size_t i = 0; i < frame.size() && i < size; ++i) buf[i] = frame[i];
  transform(buf);
  std::vector<double> power(size / 2 + 1);
  for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(buf[k]);
  return power;
}

}  // namespace lexnoise::fft

#endif  // LEXNOISE_FFT_HPP_
