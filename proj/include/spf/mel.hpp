// include/spf/mel.hpp

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

#ifndef SPF_MEL_HPP_
#define SPF_MEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "spf/common.hpp"
#include "spf/matrix.hpp"
#include "spf/stft.hpp"

namespace spf {

inline double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

struct MelSpectrogram {
  Matrix<double> data;  // T x n_mels, log scale
  int n_mels = 0;
  double fmin = 0.0;
  double fmax = 0.0;
};

// Triangular mel filterbank evaluated at the FFT bin frequencies; unit-peak
// triangles with edges equally spaced on the mel scale.
inline Matrix<double> MelFilterbank(const FrameConfig &cfg, int n_mels, double fmin, double fmax) {
  if (n_mels < 1) throw ConfigError("n_mels must be >= 1");
  if (fmax > cfg.sample_rate / 2.0) throw ConfigError("mel fmax exceeds Nyquist");
  if (fmin < 0.0 || fmin >= fmax) throw ConfigError("mel fmin must lie in [0, fmax)");
  const int F = cfg.num_bins();
  const double mel_lo = HzToMel(fmin);
  const double mel_hi = HzToMel(fmax);
  std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
  for (int m = 0; m < n_mels + 2; ++m)
    edges[static_cast<std::size_t>(m)] = MelToHz(mel_lo + (mel_hi - mel_lo) * m / (n_mels + 1));
  Matrix<double> fb(static_cast<std::size_t>(n_mels), static_cast<std::size_t>(F), 0.0);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[static_cast<std::size_t>(m)];
    const double cen = edges[static_cast<std::size_t>(m) + 1];
    const double hi = edges[static_cast<std::size_t>(m) + 2];
    for (int k = 0; k < F; ++k) {
      const double f = cfg.bin_hz(k);
      const double up = (f - lo) / (cen - lo);
      const double down = (hi - f) / (hi - cen);
      fb(static_cast<std::size_t>(m), static_cast<std::size_t>(k)) =
          std::max(0.0, std::min(up, down));
    }
  }
  return fb;
}

// Projects a linear magnitude spectrogram through the filterbank, then takes
// log with the global magnitude floor.
inline MelSpectrogram MelProject(const MagnitudeSpectrogram &mag, int n_mels, double fmin,
                                 double fmax) {
  if (mag.scale != MagnitudeScale::kLinear)
    throw InvalidInput("MelProject: magnitude must be linear-scale");
  const Matrix<double> fb = MelFilterbank(mag.config, n_mels, fmin, fmax);
  const std::size_t T = mag.data.rows();
  const std::size_t F = mag.data.cols();
  MelSpectrogram mel;
  mel.n_mels = n_mels;
  mel.fmin = fmin;
  mel.fmax = fmax;
  mel.data = Matrix<double>(T, static_cast<std::size_t>(n_mels));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t m = 0; m < static_cast<std::size_t>(n_mels); ++m) {
      double acc = 0.0;
      for (std::size_t k = 0; k < F; ++k) acc += fb(m, k) * mag.data(t, k);
      mel.data(t, m) = std::log(std::max(acc, kLogFloor));
    }
  }
  return mel;
}

// Feature normalization: linear magnitude -> dB -> affine map into
// [0, 1].  Applied to encoder-input features at emission.
inline double LinearToNormDb(double v, double ref_db, double range_db) {
  const double db = 20.0 * std::log10(std::max(v, kLogFloor));
  return std::clamp((db - ref_db + range_db) / range_db, 0.0, 1.0);
}

// Same map starting from a natural-log value (as stored in MelSpectrogram).
inline double LogToNormDb(double log_v, double ref_db, double range_db) {
  const double db = 20.0 * log_v / 2.302585092994045684017991454684;
  return std::clamp((db - ref_db + range_db) / range_db, 0.0, 1.0);
}

}  // namespace spf

#endif  // SPF_MEL_HPP_
