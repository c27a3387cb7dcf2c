// include/spf/synth.hpp

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

#ifndef SPF_SYNTH_HPP_
#define SPF_SYNTH_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "spf/common.hpp"
#include "spf/pitch.hpp"
#include "spf/rng.hpp"
#include "spf/stft.hpp"
#include "spf/vocoder.hpp"

namespace spf {

// Synthetic vowels for the verification suite: a windowed-sinc pulse train
// shaped in the STFT domain by a smooth formant envelope, plus seeded noise.
// Frequency-domain shaping keeps the actual spectral peaks exactly at the
// designed bins, which the formant oracles rely on.

constexpr double kVowelPeaksHz[3] = {750.0, 1250.0, 2500.0};
constexpr double kVowelWidthsHz[3] = {120.0, 140.0, 200.0};
constexpr double kVowelGains[3] = {1.0, 0.7, 0.35};

inline std::vector<double> FormantEnvelope(const std::vector<double> &peaks_hz,
                                           const std::vector<double> &widths_hz,
                                           const std::vector<double> &gains,
                                           const FrameConfig &cfg = FrameConfig(),
                                           double floor_db = -50.0) {
  if (peaks_hz.size() != widths_hz.size() || peaks_hz.size() != gains.size())
    throw InvalidInput("FormantEnvelope: peaks/widths/gains lengths differ");
  const int F = cfg.num_bins();
  std::vector<double> H(static_cast<std::size_t>(F), std::pow(10.0, floor_db / 20.0));
  for (int k = 0; k < F; ++k) {
    const double f = cfg.bin_hz(k);
    for (std::size_t j = 0; j < peaks_hz.size(); ++j) {
      const double d = (f - peaks_hz[j]) / widths_hz[j];
      H[static_cast<std::size_t>(k)] =
          std::max(H[static_cast<std::size_t>(k)], gains[j] * std::exp(-0.5 * d * d));
    }
  }
  return H;
}

inline std::vector<double> DefaultFormantEnvelope(const FrameConfig &cfg = FrameConfig()) {
  return FormantEnvelope({kVowelPeaksHz[0], kVowelPeaksHz[1], kVowelPeaksHz[2]},
                         {kVowelWidthsHz[0], kVowelWidthsHz[1], kVowelWidthsHz[2]},
                         {kVowelGains[0], kVowelGains[1], kVowelGains[2]}, cfg);
}

inline std::vector<double> ShapeSignal(const std::vector<double> &x, const std::vector<double> &H,
                                       const FrameConfig &cfg = FrameConfig()) {
  ComplexSpectrogram S = Stft(x, cfg);
  if (H.size() != S.data.cols()) throw InvalidInput("ShapeSignal: envelope bin count mismatch");
  for (std::size_t t = 0; t < S.data.rows(); ++t)
    for (std::size_t k = 0; k < S.data.cols(); ++k) S.data(t, k) *= H[k];
  std::vector<double> y = Istft(S);
  if (y.size() > x.size()) y.resize(x.size());
  return y;
}

inline double SignalRms(const std::vector<double> &x) {
  if (x.empty()) return 0.0;
  double e = 0.0;
  for (double v : x) e += v * v;
  return std::sqrt(e / static_cast<double>(x.size()));
}

inline std::vector<double> MakeVowel(double f0_hz, double dur_s, const std::vector<double> &H,
                                     const FrameConfig &cfg = FrameConfig(), double noise_db = -30.0,
                                     double vibrato_cents = 0.0, double vib_rate_hz = 5.0,
                                     std::uint64_t noise_seed = 7) {
  const std::size_t n = static_cast<std::size_t>(dur_s * cfg.sample_rate);
  const double pi = 3.14159265358979323846264338327950288;
  std::vector<double> fs(n, f0_hz);
  if (vibrato_cents > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / cfg.sample_rate;
      fs[i] = f0_hz * std::pow(2.0, vibrato_cents * std::sin(2.0 * pi * vib_rate_hz * t) / 1200.0);
    }
  }
  std::vector<double> src = internal::SincPulseTrain(fs, cfg.sample_rate);
  if (noise_db > -100.0) {
    const double amp = std::pow(10.0, noise_db / 20.0) * SignalRms(src);
    Rng rng(noise_seed);
    for (std::size_t i = 0; i < n; ++i) src[i] += amp * rng.NextGaussian();
  }
  std::vector<double> y = ShapeSignal(src, H, cfg);
  const double r = SignalRms(y);
  if (r > 0.0)
    for (double &v : y) v *= 0.1 / r;
  return y;
}

// Population standard deviation of the voiced contour in cents.
inline double CentsStd(const PitchContour &p) {
  std::vector<double> cents;
  for (std::size_t t = 0; t < p.size(); ++t)
    if (p.voiced[t] && p.f0[t] > 0.0) cents.push_back(1200.0 * std::log2(p.f0[t]));
  if (cents.empty()) return 0.0;
  double mean = 0.0;
  for (double c : cents) mean += c;
  mean /= static_cast<double>(cents.size());
  double var = 0.0;
  for (double c : cents) var += (c - mean) * (c - mean);
  return std::sqrt(var / static_cast<double>(cents.size()));
}

inline double VoicedMeanF0(const PitchContour &p) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (p.voiced[t]) {
      sum += p.f0[t];
      ++count;
    }
  }
  return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

inline double VoicedFraction(const PitchContour &p) {
  if (p.size() == 0) return 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < p.size(); ++t)
    if (p.voiced[t]) ++count;
  return static_cast<double>(count) / static_cast<double>(p.size());
}

}  // namespace spf

#endif  // SPF_SYNTH_HPP_
