// include/spf/stft.hpp

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

#ifndef SPF_STFT_HPP_
#define SPF_STFT_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "spf/common.hpp"
#include "spf/fft.hpp"
#include "spf/matrix.hpp"

namespace spf {

enum class WindowKind { kHann, kRect };

// Framing convention shared by every spectral operation.  Frame t is centered
// on sample t*hop_length of the (reflection-padded) signal, so analysis and
// vocoder frame indices always line up.
struct FrameConfig {
  int sample_rate = 16000;
  int frame_length = 1024;
  int hop_length = 256;
  int fft_size = 1024;
  WindowKind window = WindowKind::kHann;

  void Validate() const {
    if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
    if (frame_length <= 0 || hop_length <= 0 || fft_size <= 0)
      throw ConfigError("frame/hop/fft sizes must be positive");
    if (hop_length > frame_length) throw ConfigError("hop_length must not exceed frame_length");
    if (frame_length > fft_size) throw ConfigError("frame_length must not exceed fft_size");
    if (!IsPowerOfTwo(static_cast<std::size_t>(fft_size)))
      throw ConfigError("fft_size must be a power of two");
  }

  int num_bins() const { return fft_size / 2 + 1; }
  int num_frames(std::size_t num_samples) const {
    return static_cast<int>((num_samples + static_cast<std::size_t>(hop_length) - 1) /
                            static_cast<std::size_t>(hop_length));
  }
  double bin_hz(int k) const {
    return static_cast<double>(k) * sample_rate / static_cast<double>(fft_size);
  }
};

inline std::vector<double> MakeWindow(WindowKind kind, int length) {
  std::vector<double> w(static_cast<std::size_t>(length), 1.0);
  if (kind == WindowKind::kHann) {
    const double pi = 3.14159265358979323846264338327950288;
    for (int n = 0; n < length; ++n)
      w[static_cast<std::size_t>(n)] = 0.5 - 0.5 * std::cos(2.0 * pi * n / length);
  }
  return w;
}

struct ComplexSpectrogram {
  Matrix<std::complex<double>> data;  // T x (fft_size/2 + 1)
  FrameConfig config;
};

enum class MagnitudeScale { kLinear, kLog };

struct MagnitudeSpectrogram {
  Matrix<double> data;  // T x F
  MagnitudeScale scale = MagnitudeScale::kLinear;
  FrameConfig config;
};

// Reflection indexing: maps a virtual sample position (possibly outside
// [0, n)) onto the signal by bouncing off both ends.
inline std::size_t ReflectIndex(long long v, std::size_t n) {
  if (n == 1) return 0;
  const long long last = static_cast<long long>(n) - 1;
  while (v < 0 || v > last) {
    if (v < 0) v = -v;
    if (v > last) v = 2 * last - v;
  }
  return static_cast<std::size_t>(v);
}

// Short-time Fourier transform.  T = ceil(len(x)/hop); frame t covers
// original-signal positions [t*hop - frame/2, t*hop + frame/2).
inline ComplexSpectrogram Stft(const std::vector<double> &x, const FrameConfig &cfg) {
  cfg.Validate();
  if (x.empty()) throw InvalidInput("Stft: empty signal");
  const int T = cfg.num_frames(x.size());
  const int F = cfg.num_bins();
  const std::vector<double> win = MakeWindow(cfg.window, cfg.frame_length);
  const int pad = cfg.frame_length / 2;
  ComplexSpectrogram spec;
  spec.config = cfg;
  spec.data = Matrix<std::complex<double>>(static_cast<std::size_t>(T),
                                           static_cast<std::size_t>(F));
  std::vector<double> frame(static_cast<std::size_t>(cfg.frame_length));
  for (int t = 0; t < T; ++t) {
    const long long start = static_cast<long long>(t) * cfg.hop_length - pad;
    for (int i = 0; i < cfg.frame_length; ++i)
      frame[static_cast<std::size_t>(i)] =
          x[ReflectIndex(start + i, x.size())] * win[static_cast<std::size_t>(i)];
    std::vector<std::complex<double>> bins = RealFft(frame, static_cast<std::size_t>(cfg.fft_size));
    for (int k = 0; k < F; ++k) spec.data(static_cast<std::size_t>(t), static_cast<std::size_t>(k)) = bins[static_cast<std::size_t>(k)];
  }
  return spec;
}

// Weighted overlap-add inverse.  Output length is exactly T*hop.  Throws
// ConfigError when the window/hop pair leaves overlap-add gaps (non-COLA).
inline std::vector<double> Istft(const ComplexSpectrogram &spec) {
  const FrameConfig &cfg = spec.config;
  cfg.Validate();
  const int T = static_cast<int>(spec.data.rows());
  if (T < 1) throw InvalidInput("Istft: empty spectrogram");
  if (static_cast<int>(spec.data.cols()) != cfg.num_bins())
    throw InvalidInput("Istft: bin count does not match config");
  const std::vector<double> win = MakeWindow(cfg.window, cfg.frame_length);
  const int pad = cfg.frame_length / 2;
  const std::size_t n = static_cast<std::size_t>(T) * static_cast<std::size_t>(cfg.hop_length);
  std::vector<double> acc(n + static_cast<std::size_t>(cfg.frame_length), 0.0);
  std::vector<double> den(n + static_cast<std::size_t>(cfg.frame_length), 0.0);
  std::vector<std::complex<double>> half(static_cast<std::size_t>(cfg.num_bins()));
  for (int t = 0; t < T; ++t) {
    for (int k = 0; k < cfg.num_bins(); ++k)
      half[static_cast<std::size_t>(k)] = spec.data(static_cast<std::size_t>(t), static_cast<std::size_t>(k));
    std::vector<double> frame = InverseRealFft(half, static_cast<std::size_t>(cfg.fft_size));
    const std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(cfg.hop_length);
    for (int i = 0; i < cfg.frame_length; ++i) {
      acc[base + static_cast<std::size_t>(i)] += frame[static_cast<std::size_t>(i)] * win[static_cast<std::size_t>(i)];
      den[base + static_cast<std::size_t>(i)] += win[static_cast<std::size_t>(i)] * win[static_cast<std::size_t>(i)];
    }
  }
  std::vector<double> out(n);
  double min_den = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = den[static_cast<std::size_t>(pad) + i];
    if (d < min_den) min_den = d;
  }
  if (min_den < 1e-8)
    throw ConfigError("Istft: window/hop pair is not COLA-compliant (overlap-add gap)");
  for (std::size_t i = 0; i < n; ++i)
    out[i] = acc[static_cast<std::size_t>(pad) + i] / den[static_cast<std::size_t>(pad) + i];
  return out;
}

inline MagnitudeSpectrogram Magnitude(const ComplexSpectrogram &spec) {
  MagnitudeSpectrogram mag;
  mag.config = spec.config;
  mag.scale = MagnitudeScale::kLinear;
  mag.data = Matrix<double>(spec.data.rows(), spec.data.cols());
  for (std::size_t t = 0; t < spec.data.rows(); ++t)
    for (std::size_t k = 0; k < spec.data.cols(); ++k) mag.data(t, k) = std::abs(spec.data(t, k));
  return mag;
}

inline MagnitudeSpectrogram Spectrogram(const std::vector<double> &x, const FrameConfig &cfg) {
  return Magnitude(Stft(x, cfg));
}

}  // namespace spf

#endif  // SPF_STFT_HPP_
