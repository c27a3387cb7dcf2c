// include/spf/vocoder.hpp

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

#ifndef SPF_VOCODER_HPP_
#define SPF_VOCODER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "spf/cepstrum.hpp"
#include "spf/common.hpp"
#include "spf/matrix.hpp"
#include "spf/pitch.hpp"
#include "spf/rng.hpp"
#include "spf/stft.hpp"

namespace spf {

constexpr int kNumBands = 4;
constexpr std::array<double, kNumBands + 1> kBandEdgesHz = {0.0, 1000.0, 2000.0, 4000.0, 8000.0};
constexpr int kDefaultCepstralOrder = 60;
constexpr int kPulseHalfWidth = 16;
constexpr std::uint64_t kDefaultSynthesisSeed = 123;

inline int BandOfBin(int k, const FrameConfig &cfg) {
  const double f = cfg.bin_hz(k);
  for (int b = 0; b < kNumBands; ++b) {
    if (f < kBandEdgesHz[static_cast<std::size_t>(b + 1)] || b == kNumBands - 1) {
      if (f >= kBandEdgesHz[static_cast<std::size_t>(b)]) return b;
    }
  }
  return kNumBands - 1;
}

struct Aperiodicity {
  Matrix<double> ap;  // T x kNumBands, entries in [0, 1]
};

struct SpectralEnvelope {
  Matrix<double> env;  // T x (fft_size/2 + 1), strictly positive
};

struct AnalysisResult {
  PitchContour pitch;
  Aperiodicity aperiodicity;
  SpectralEnvelope envelope;
  std::uint64_t config_hash = 0;
};

// Spectral envelope by cepstral smoothing: keep quefrencies within +-(order-1)
// of zero (circularly), reconstruct, then rescale each frame so the envelope
// carries the frame's spectral power (log-domain smoothing alone lands on the
// geometric mean, which underestimates energy).
inline SpectralEnvelope CepstralEnvelope(const MagnitudeSpectrogram &mag,
                                         int order = kDefaultCepstralOrder) {
  if (order < 2 || order >= mag.config.fft_size / 2)
    throw ConfigError("CepstralEnvelope: order must satisfy 2 <= order < fft_size/2");
  Cepstrum cep = RealCepstrumOfMagnitude(mag);
  const int N = mag.config.fft_size;
  for (std::size_t t = 0; t < cep.data.rows(); ++t)
    for (int q = order; q <= N - order; ++q) cep.data(t, static_cast<std::size_t>(q)) = 0.0;
  MagnitudeSpectrogram smooth = EnvelopeFromCepstrum(cep);
  SpectralEnvelope out;
  out.env = std::move(smooth.data);
  for (std::size_t t = 0; t < out.env.rows(); ++t) {
    double e_env = 0.0, e_mag = 0.0;
    for (std::size_t k = 0; k < out.env.cols(); ++k) {
      e_env += out.env(t, k) * out.env(t, k);
      e_mag += mag.data(t, k) * mag.data(t, k);
    }
    const double sc = e_env > 1e-30 ? std::sqrt(e_mag / e_env) : 0.0;
    for (std::size_t k = 0; k < out.env.cols(); ++k)
      out.env(t, k) = std::max(out.env(t, k) * sc, kLogFloor);
  }
  return out;
}

// Band-wise aperiodicity: 1 - normalized autocorrelation of the band-limited
// frame at the pitch lag.  Unvoiced frames and empty bands stay at 1.
inline Aperiodicity ComputeAperiodicity(const std::vector<double> &x, const PitchContour &p,
                                        const FrameConfig &cfg = FrameConfig()) {
  cfg.Validate();
  const int T = static_cast<int>(p.size());
  const int F = cfg.num_bins();
  const int N = cfg.fft_size;
  const int FL = cfg.frame_length;
  const int pad = FL / 2;
  Aperiodicity out;
  out.ap = Matrix<double>(static_cast<std::size_t>(T), static_cast<std::size_t>(kNumBands));
  for (std::size_t i = 0; i < static_cast<std::size_t>(T) * kNumBands; ++i) out.ap.data()[i] = 1.0;

  std::vector<int> band(static_cast<std::size_t>(F));
  for (int k = 0; k < F; ++k) band[static_cast<std::size_t>(k)] = BandOfBin(k, cfg);
  const std::vector<double> win = MakeWindow(cfg.window, FL);
  std::vector<double> frame(static_cast<std::size_t>(FL));
  std::vector<std::complex<double>> half(static_cast<std::size_t>(F));

  for (int t = 0; t < T; ++t) {
    if (!p.voiced[static_cast<std::size_t>(t)] || p.f0[static_cast<std::size_t>(t)] <= 0.0) continue;
    const int lag = static_cast<int>(std::lround(cfg.sample_rate / p.f0[static_cast<std::size_t>(t)]));
    if (lag >= FL || lag < 1) continue;
    const long long start = static_cast<long long>(t) * cfg.hop_length - pad;
    for (int i = 0; i < FL; ++i)
      frame[static_cast<std::size_t>(i)] = x[ReflectIndex(start + i, x.size())] * win[static_cast<std::size_t>(i)];
    const std::vector<std::complex<double>> S = RealFft(frame, static_cast<std::size_t>(N));
    for (int b = 0; b < kNumBands; ++b) {
      for (int k = 0; k < F; ++k)
        half[static_cast<std::size_t>(k)] =
            band[static_cast<std::size_t>(k)] == b ? S[static_cast<std::size_t>(k)] : 0.0;
      const std::vector<double> xb = InverseRealFft(half, static_cast<std::size_t>(N));
      double ea = 0.0, eb = 0.0, dot = 0.0;
      for (int i = 0; i < FL - lag; ++i) {
        ea += xb[static_cast<std::size_t>(i)] * xb[static_cast<std::size_t>(i)];
        dot += xb[static_cast<std::size_t>(i)] * xb[static_cast<std::size_t>(i + lag)];
      }
      for (int i = lag; i < FL; ++i) eb += xb[static_cast<std::size_t>(i)] * xb[static_cast<std::size_t>(i)];
      if (ea < 1e-20 || eb < 1e-20) continue;
      const double r = dot / std::sqrt(ea * eb);
      out.ap(static_cast<std::size_t>(t), static_cast<std::size_t>(b)) = std::clamp(1.0 - r, 0.0, 1.0);
    }
  }
  return out;
}

inline std::uint64_t AnalysisConfigHash(const FrameConfig &cfg, double f_min, double f_max,
                                        double thresh, int order) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "sr=%d;frame=%d;hop=%d;fft=%d;win=%d;fmin=%.6f;fmax=%.6f;thr=%.6f;ord=%d",
                cfg.sample_rate, cfg.frame_length, cfg.hop_length, cfg.fft_size,
                static_cast<int>(cfg.window), f_min, f_max, thresh, order);
  return Fnv1a64(buf);
}

inline AnalysisResult Analyze(const std::vector<double> &x, const FrameConfig &cfg = FrameConfig(),
                              double f_min = kF0SearchMin, double f_max = kF0SearchMax,
                              double thresh = kVoicingThreshold, int order = kDefaultCepstralOrder) {
  AnalysisResult r;
  r.pitch = EstimateF0(x, cfg, f_min, f_max, thresh);
  r.envelope = CepstralEnvelope(Spectrogram(x, cfg), order);
  r.aperiodicity = ComputeAperiodicity(x, r.pitch, cfg);
  r.config_hash = AnalysisConfigHash(cfg, f_min, f_max, thresh, order);
  return r;
}

namespace internal {

// Nearest-voiced hold: every frame takes the f0 of the closest voiced frame
// so the pulse-train phase stays continuous through unvoiced gaps.
inline std::vector<double> HoldFill(const PitchContour &p) {
  const int T = static_cast<int>(p.size());
  std::vector<double> out(static_cast<std::size_t>(T), 0.0);
  std::vector<int> vi;
  for (int t = 0; t < T; ++t)
    if (p.voiced[static_cast<std::size_t>(t)]) vi.push_back(t);
  if (vi.empty()) return out;
  for (int t = 0; t < T; ++t) {
    int best = vi[0];
    for (int j : vi)
      if (std::abs(j - t) < std::abs(best - t)) best = j;
    out[static_cast<std::size_t>(t)] = p.f0[static_cast<std::size_t>(best)];
  }
  return out;
}

// Phase-accumulated excitation with Hann-windowed sinc pulses at fractional
// positions, amplitude sqrt(sr/f0) so the train has unit RMS.
inline std::vector<double> SincPulseTrain(const std::vector<double> &fcurve, double sample_rate,
                                          int half = kPulseHalfWidth) {
  const double pi = 3.14159265358979323846264338327950288;
  const int n = static_cast<int>(fcurve.size());
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  double ph = 0.5;
  for (int i = 0; i < n; ++i) {
    const double f = fcurve[static_cast<std::size_t>(i)];
    if (f <= 0.0) continue;
    ph += f / sample_rate;
    if (ph >= 1.0) {
      ph -= 1.0;
      const double pos = i - ph / (f / sample_rate);
      const double amp = std::sqrt(sample_rate / f);
      const int i0 = static_cast<int>(std::floor(pos));
      for (int j = std::max(0, i0 - half + 1); j < std::min(n, i0 + half + 1); ++j) {
        const double u = j - pos;
        const double sinc = std::abs(u) < 1e-12 ? 1.0 : std::sin(pi * u) / (pi * u);
        x[static_cast<std::size_t>(j)] += amp * (0.5 + 0.5 * std::cos(pi * u / half)) * sinc;
      }
    }
  }
  return x;
}

}  // namespace internal

// Pulse+noise synthesis: band-wise mix of a pulse-train spectrogram and a
// seeded noise spectrogram weighted by aperiodicity, shaped by the envelope,
// rescaled per frame to the envelope's power, then overlap-added.
inline std::vector<double> Synthesize(const PitchContour &p, const Aperiodicity &ap,
                                      const SpectralEnvelope &env, std::size_t n_out,
                                      const FrameConfig &cfg = FrameConfig(),
                                      std::uint64_t noise_seed = kDefaultSynthesisSeed) {
  cfg.Validate();
  const int T = static_cast<int>(p.size());
  if (T < 1) throw InvalidInput("Synthesize: empty pitch contour");
  if (ap.ap.rows() != static_cast<std::size_t>(T) || env.env.rows() != static_cast<std::size_t>(T))
    throw InvalidInput("Synthesize: pitch/aperiodicity/envelope frame counts differ");
  if (ap.ap.cols() != static_cast<std::size_t>(kNumBands))
    throw InvalidInput("Synthesize: aperiodicity band count mismatch");
  if (env.env.cols() != static_cast<std::size_t>(cfg.num_bins()))
    throw InvalidInput("Synthesize: envelope bin count does not match config");

  const std::size_t n = static_cast<std::size_t>(T) * static_cast<std::size_t>(cfg.hop_length);
  const std::vector<double> fh = internal::HoldFill(p);
  bool any_voiced = false;
  for (std::size_t t = 0; t < p.size(); ++t) any_voiced = any_voiced || p.voiced[t];

  std::vector<double> fs(n, 0.0);
  if (any_voiced) {
    for (std::size_t i = 0; i < n; ++i) {
      const double tt = static_cast<double>(i) / cfg.hop_length;
      const int t0 = std::min(static_cast<int>(tt), T - 1);
      const int t1 = std::min(t0 + 1, T - 1);
      const double u = tt - t0;
      fs[i] = (1.0 - u) * fh[static_cast<std::size_t>(t0)] + u * fh[static_cast<std::size_t>(t1)];
    }
  }
  const std::vector<double> pulses = internal::SincPulseTrain(fs, cfg.sample_rate);
  std::vector<double> noise(n);
  Rng rng(noise_seed);
  for (std::size_t i = 0; i < n; ++i) noise[i] = rng.NextGaussian();

  const ComplexSpectrogram P = Stft(pulses, cfg);
  const ComplexSpectrogram N = Stft(noise, cfg);
  const int F = cfg.num_bins();
  std::vector<int> band(static_cast<std::size_t>(F));
  for (int k = 0; k < F; ++k) band[static_cast<std::size_t>(k)] = BandOfBin(k, cfg);

  ComplexSpectrogram Y;
  Y.config = cfg;
  Y.data = Matrix<std::complex<double>>(static_cast<std::size_t>(T), static_cast<std::size_t>(F));
  for (int t = 0; t < T; ++t) {
    double ey = 0.0, ee = 0.0;
    for (int k = 0; k < F; ++k) {
      const double a = ap.ap(static_cast<std::size_t>(t), static_cast<std::size_t>(band[static_cast<std::size_t>(k)]));
      const std::complex<double> mix =
          P.data(static_cast<std::size_t>(t), static_cast<std::size_t>(k)) * (1.0 - a) +
          N.data(static_cast<std::size_t>(t), static_cast<std::size_t>(k)) * a;
      const std::complex<double> y = mix * env.env(static_cast<std::size_t>(t), static_cast<std::size_t>(k));
      Y.data(static_cast<std::size_t>(t), static_cast<std::size_t>(k)) = y;
      ey += std::norm(y);
      const double e = env.env(static_cast<std::size_t>(t), static_cast<std::size_t>(k));
      ee += e * e;
    }
    const double sc = ey > 1e-30 ? std::sqrt(ee / std::max(ey, 1e-30)) : 0.0;
    for (int k = 0; k < F; ++k)
      Y.data(static_cast<std::size_t>(t), static_cast<std::size_t>(k)) *= sc;
  }
  std::vector<double> y = Istft(Y);
  if (y.size() > n_out) y.resize(n_out);
  return y;
}

// Analysis, voiced-mean pitch flattening, re-synthesis; output trimmed to the
// input length so no trailing noise-only frames are introduced.
inline std::vector<double> Monotonize(const std::vector<double> &x,
                                      const FrameConfig &cfg = FrameConfig(),
                                      std::uint64_t noise_seed = kDefaultSynthesisSeed) {
  AnalysisResult a = Analyze(x, cfg);
  const PitchContour flat = SmoothPitch(a.pitch);
  return Synthesize(flat, a.aperiodicity, a.envelope, x.size(), cfg, noise_seed);
}

}  // namespace spf

#endif  // SPF_VOCODER_HPP_
