// include/spf/fft.hpp

// Copyright 2026  The spf authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#ifndef SPF_FFT_HPP_
#define SPF_FFT_HPP_

#include <complex>
#include <cstddef>
#include <vector>

#include "spf/common.hpp"

namespace spf {

inline bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey transform.  Forward uses the
// e^{-i2pi/N} kernel; the inverse divides by N.  Sizes must be powers of two.
inline void Fft(std::vector<std::complex<double>> *data, bool inverse) {
  std::vector<std::complex<double>> &a = *data;
  const std::size_t n = a.size();
  if (!IsPowerOfTwo(n)) throw InvalidInput("Fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double pi = 3.14159265358979323846264338327950288;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (std::size_t i = 0; i < n; ++i) a[i] /= static_cast<double>(n);
  }
}

// Real-input forward transform returning the n/2+1 nonnegative-frequency bins.
inline std::vector<std::complex<double>> RealFft(const std::vector<double> &x, std::size_t n) {
  if (!IsPowerOfTwo(n)) throw InvalidInput("RealFft: size must be a power of two");
  std::vector<std::complex<double>> buf(n, std::complex<double>(0.0, 0.0));
  const std::size_t m = x.size() < n ? x.size() : n;
  for (std::size_t i = 0; i < m; ++i) buf[i] = std::complex<double>(x[i], 0.0);
  Fft(&buf, false);
  buf.resize(n / 2 + 1);
  return buf;
}

// Inverse of RealFft: expands the half spectrum by conjugate symmetry and
// returns the length-n real signal.
inline std::vector<double> InverseRealFft(const std::vector<std::complex<double>> &half,
                                          std::size_t n) {
  if (!IsPowerOfTwo(n)) throw InvalidInput("InverseRealFft: size must be a power of two");
  if (half.size() != n / 2 + 1) throw InvalidInput("InverseRealFft: half-spectrum size mismatch");
  std::vector<std::complex<double>> buf(n);
  for (std::size_t k = 0; k <= n / 2; ++k) buf[k] = half[k];
  for (std::size_t k = n / 2 + 1; k < n; ++k) buf[k] = std::conj(half[n - k]);
  Fft(&buf, true);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].real();
  return out;
}

}  // namespace spf

#endif  // SPF_FFT_HPP_
