// include/spf/vtlp.hpp

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

#ifndef SPF_VTLP_HPP_
#define SPF_VTLP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "spf/common.hpp"
#include "spf/rng.hpp"
#include "spf/stft.hpp"

namespace spf {

constexpr double kAlphaMin = 0.9;
constexpr double kAlphaMax = 1.1;

struct WarpFactor {
  double alpha = 1.0;
  std::uint64_t seed = 0;  // provenance tag
};

struct WarpConfig {
  double boundary_freq = 4800.0;  // piecewise-linear knee, Hz

  void Validate(double sample_rate) const {
    if (!(boundary_freq > 0.0 && boundary_freq < sample_rate / 2.0))
      throw ConfigError("WarpConfig: boundary_freq must lie in (0, Nyquist)");
  }
};

inline WarpFactor SampleAlpha(Rng *rng) {
  WarpFactor w;
  w.seed = 0;
  w.alpha = rng->Uniform(kAlphaMin, kAlphaMax);
  return w;
}

// Piecewise-linear frequency warp: f -> alpha*f below the knee at
// min(alpha,1)*boundary, linearly rescaled above it so Nyquist maps to
// Nyquist.  Implemented by inverse mapping each output bin to its source
// frequency, linearly interpolating, and weighting by sqrt of the local
// slope d f_src / d f_out so frame energy is preserved on smooth spectra.
inline MagnitudeSpectrogram VtlpWarp(const MagnitudeSpectrogram &spec, const WarpFactor &w,
                                     const WarpConfig &cfg = WarpConfig()) {
  if (spec.scale != MagnitudeScale::kLinear)
    throw InvalidInput("VtlpWarp: spectrogram must be linear-scale");
  if (w.alpha < kAlphaMin || w.alpha > kAlphaMax)
    throw InvalidInput("VtlpWarp: alpha outside [0.9, 1.1]");
  cfg.Validate(spec.config.sample_rate);

  const double alpha = w.alpha;
  const double nyq = spec.config.sample_rate / 2.0;
  const double bw = static_cast<double>(spec.config.sample_rate) / spec.config.fft_size;
  const int F = spec.config.num_bins();
  const double knee_out = std::min(alpha, 1.0) * cfg.boundary_freq;
  const double knee_src = knee_out / alpha;

  MagnitudeSpectrogram out;
  out.config = spec.config;
  out.scale = MagnitudeScale::kLinear;
  out.data = Matrix<double>(spec.data.rows(), static_cast<std::size_t>(F));

  std::vector<int> idx0(static_cast<std::size_t>(F)), idx1(static_cast<std::size_t>(F));
  std::vector<double> frac(static_cast<std::size_t>(F)), gain(static_cast<std::size_t>(F));
  for (int k = 0; k < F; ++k) {
    const double f = k * bw;
    double src, slope;
    if (f <= knee_out) {
      src = f / alpha;
      slope = 1.0 / alpha;
    } else {
      slope = (nyq - knee_src) / (nyq - knee_out);
      src = knee_src + (f - knee_out) * slope;
    }
    const double pos = src / bw;
    int i0 = static_cast<int>(std::floor(pos));
    const double fr = pos - i0;
    i0 = std::min(std::max(i0, 0), F - 1);
    const int i1 = std::min(i0 + 1, F - 1);
    idx0[static_cast<std::size_t>(k)] = i0;
    idx1[static_cast<std::size_t>(k)] = i1;
    frac[static_cast<std::size_t>(k)] = fr;
    gain[static_cast<std::size_t>(k)] = std::sqrt(slope);
  }
  for (std::size_t t = 0; t < spec.data.rows(); ++t) {
    const double *in = spec.data.row(t);
    double *o = out.data.row(t);
    for (int k = 0; k < F; ++k) {
      const std::size_t kk = static_cast<std::size_t>(k);
      o[kk] = (in[idx0[kk]] * (1.0 - frac[kk]) + in[idx1[kk]] * frac[kk]) * gain[kk];
    }
  }
  return out;
}

// Waveform export: warp the magnitude, reapply the original phase, invert.
inline std::vector<double> PerturbWaveform(const std::vector<double> &x, const WarpFactor &w,
                                           const FrameConfig &fc = FrameConfig(),
                                           const WarpConfig &wc = WarpConfig()) {
  ComplexSpectrogram S = Stft(x, fc);
  MagnitudeSpectrogram warped = VtlpWarp(Magnitude(S), w, wc);
  ComplexSpectrogram Y;
  Y.config = S.config;
  Y.data = Matrix<std::complex<double>>(S.data.rows(), S.data.cols());
  for (std::size_t t = 0; t < S.data.rows(); ++t) {
    for (std::size_t k = 0; k < S.data.cols(); ++k) {
      const std::complex<double> v = S.data(t, k);
      const double m = std::abs(v);
      const std::complex<double> ph = m > 0.0 ? v / m : std::complex<double>(1.0, 0.0);
      Y.data(t, k) = warped.data(t, k) * ph;
    }
  }
  std::vector<double> y = Istft(Y);
  if (y.size() > x.size()) y.resize(x.size());
  return y;
}

}  // namespace spf

#endif  // SPF_VTLP_HPP_
