// include/spf/cepstrum.hpp

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

#ifndef SPF_CEPSTRUM_HPP_
#define SPF_CEPSTRUM_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "spf/common.hpp"
#include "spf/fft.hpp"
#include "spf/matrix.hpp"
#include "spf/stft.hpp"

namespace spf {

struct Cepstrum {
  Matrix<double> data;  // T x fft_size (quefrency axis)
  FrameConfig config;
};

// Low-quefrency lifter.  Weights follow 0.5*u[n_c - i] + 0.5*u[n_c - i - 1]
// with u[0] = 1 (so indices 0..n_c-1 get 1, index n_c gets 0.5), mirrored
// about fft_size/2 so the liftered cepstrum stays even and the envelope real.
struct Lifter {
  int n_c = 0;
  std::vector<double> weights;  // length fft_size
};

inline Lifter MakeLifter(int n_c, int fft_size, bool binarized = false) {
  if (n_c < 1 || n_c >= fft_size / 2)
    throw ConfigError("MakeLifter: n_c must satisfy 1 <= n_c < fft_size/2");
  Lifter l;
  l.n_c = n_c;
  l.weights.assign(static_cast<std::size_t>(fft_size), 0.0);
  for (int i = 0; i < n_c; ++i) l.weights[static_cast<std::size_t>(i)] = 1.0;
  l.weights[static_cast<std::size_t>(n_c)] = binarized ? 1.0 : 0.5;
  for (int i = 1; i <= fft_size / 2; ++i)
    l.weights[static_cast<std::size_t>(fft_size - i)] = l.weights[static_cast<std::size_t>(i)];
  return l;
}

namespace internal {

// Expands the nonnegative-frequency log magnitudes of one frame into the
// full even spectrum of length fft_size.
inline void FillEvenLogSpectrum(const double *mag_row, int num_bins, int fft_size,
                                std::vector<std::complex<double>> *full) {
  full->assign(static_cast<std::size_t>(fft_size), std::complex<double>(0.0, 0.0));
  for (int k = 0; k < num_bins; ++k) {
    const double lv = std::log(std::max(mag_row[k], kLogFloor));
    (*full)[static_cast<std::size_t>(k)] = std::complex<double>(lv, 0.0);
    if (k > 0 && k < fft_size / 2)
      (*full)[static_cast<std::size_t>(fft_size - k)] = std::complex<double>(lv, 0.0);
  }
}

}  // namespace internal

// Real cepstrum: per-frame inverse DFT of the floored log-magnitude spectrum.
inline Cepstrum RealCepstrum(const ComplexSpectrogram &spec) {
  if (spec.data.rows() == 0) throw InvalidInput("RealCepstrum: empty spectrogram");
  const int N = spec.config.fft_size;
  const int F = spec.config.num_bins();
  Cepstrum cep;
  cep.config = spec.config;
  cep.data = Matrix<double>(spec.data.rows(), static_cast<std::size_t>(N));
  std::vector<std::complex<double>> full;
  std::vector<double> mag(static_cast<std::size_t>(F));
  for (std::size_t t = 0; t < spec.data.rows(); ++t) {
    for (int k = 0; k < F; ++k) mag[static_cast<std::size_t>(k)] = std::abs(spec.data(t, static_cast<std::size_t>(k)));
    internal::FillEvenLogSpectrum(mag.data(), F, N, &full);
    Fft(&full, true);
    for (int q = 0; q < N; ++q) cep.data(t, static_cast<std::size_t>(q)) = full[static_cast<std::size_t>(q)].real();
  }
  return cep;
}

// Same transform starting from a linear magnitude spectrogram.
inline Cepstrum RealCepstrumOfMagnitude(const MagnitudeSpectrogram &mag) {
  if (mag.scale != MagnitudeScale::kLinear)
    throw InvalidInput("RealCepstrumOfMagnitude: magnitude must be linear-scale");
  if (mag.data.rows() == 0) throw InvalidInput("RealCepstrumOfMagnitude: empty spectrogram");
  const int N = mag.config.fft_size;
  Cepstrum cep;
  cep.config = mag.config;
  cep.data = Matrix<double>(mag.data.rows(), static_cast<std::size_t>(N));
  std::vector<std::complex<double>> full;
  for (std::size_t t = 0; t < mag.data.rows(); ++t) {
    internal::FillEvenLogSpectrum(mag.data.row(t), static_cast<int>(mag.data.cols()), N, &full);
    Fft(&full, true);
    for (int q = 0; q < N; ++q) cep.data(t, static_cast<std::size_t>(q)) = full[static_cast<std::size_t>(q)].real();
  }
  return cep;
}

// Elementwise lifter application per quefrency.
inline Cepstrum LifterCepstrum(const Cepstrum &c, const Lifter &l) {
  if (l.weights.size() != c.data.cols())
    throw InvalidInput("LifterCepstrum: lifter length does not match cepstrum width");
  Cepstrum out;
  out.config = c.config;
  out.data = Matrix<double>(c.data.rows(), c.data.cols());
  for (std::size_t t = 0; t < c.data.rows(); ++t)
    for (std::size_t q = 0; q < c.data.cols(); ++q)
      out.data(t, q) = c.data(t, q) * l.weights[q];
  return out;
}

// Envelope reconstruction: per-frame forward DFT of the liftered cepstrum,
// exponentiated; returns the nonnegative-frequency bins as a linear
// magnitude spectrogram.
inline MagnitudeSpectrogram EnvelopeFromCepstrum(const Cepstrum &c_l) {
  const int N = c_l.config.fft_size;
  const int F = c_l.config.num_bins();
  MagnitudeSpectrogram env;
  env.config = c_l.config;
  env.scale = MagnitudeScale::kLinear;
  env.data = Matrix<double>(c_l.data.rows(), static_cast<std::size_t>(F));
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(N));
  for (std::size_t t = 0; t < c_l.data.rows(); ++t) {
    for (int q = 0; q < N; ++q)
      buf[static_cast<std::size_t>(q)] = std::complex<double>(c_l.data(t, static_cast<std::size_t>(q)), 0.0);
    Fft(&buf, false);
    for (int k = 0; k < F; ++k)
      env.data(t, static_cast<std::size_t>(k)) = std::exp(buf[static_cast<std::size_t>(k)].real());
  }
  return env;
}

// Cepstral smoothing used by the vocoder: keeps quefrencies below `order`
// (symmetrically), then reconstructs the envelope.
inline MagnitudeSpectrogram CepstralSmooth(const MagnitudeSpectrogram &mag, int order) {
  Cepstrum cep = RealCepstrumOfMagnitude(mag);
  const Lifter l = MakeLifter(order, mag.config.fft_size);
  return EnvelopeFromCepstrum(LifterCepstrum(cep, l));
}

}  // namespace spf

#endif  // SPF_CEPSTRUM_HPP_
