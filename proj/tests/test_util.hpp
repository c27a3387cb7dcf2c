// tests/test_util.hpp

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

#ifndef SPF_TESTS_TEST_UTIL_HPP_
#define SPF_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spf/matrix.hpp"
#include "spf/rng.hpp"
#include "spf/stft.hpp"

namespace spf_test {

// Quadratic-time DFT used as an independent oracle for the FFT.
inline std::vector<std::complex<double>> NaiveDft(const std::vector<std::complex<double>> &x,
                                                  bool inverse = false) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * 3.14159265358979323846 * static_cast<double>(k * j) /
                         static_cast<double>(n);
      acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    if (inverse) acc /= static_cast<double>(n);
    out[k] = acc;
  }
  return out;
}

inline double Pearson(const std::vector<double> &a, const std::vector<double> &b) {
  const std::size_t n = std::min(a.size(), b.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

// Per-frame RMS energy contour with the library's framing convention.
inline std::vector<double> EnergyContour(const std::vector<double> &x, const spf::FrameConfig &cfg) {
  const std::size_t T = cfg.num_frames(x.size());
  std::vector<double> e(T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    const long start = static_cast<long>(t) * cfg.hop_length;
    double acc = 0.0;
    for (long i = start; i < start + cfg.frame_length && i < static_cast<long>(x.size()); ++i)
      if (i >= 0) acc += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    e[t] = std::sqrt(acc / cfg.frame_length);
  }
  return e;
}

inline std::vector<double> WhiteNoise(std::size_t n, std::uint64_t seed, double amp = 0.1) {
  spf::Rng rng(seed);
  std::vector<double> x(n);
  for (double &v : x) v = amp * rng.NextGaussian();
  return x;
}

// Scratch directory under the build tree, wiped on construction.
struct TempDir {
  std::string path;

  explicit TempDir(const std::string &name)
      : path((std::filesystem::path("test_tmp") / name).generic_string()) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
};

}  // namespace spf_test

#endif  // SPF_TESTS_TEST_UTIL_HPP_
