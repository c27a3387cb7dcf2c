// include/spf/probes.hpp

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

// Property-based probe battery over the full signal-processing front end.
// Each probe corresponds to one numbered acceptance check, runs on synthetic
// audio only, and reports a one-line verdict plus measured values.

#ifndef SPF_PROBES_HPP_
#define SPF_PROBES_HPP_

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "spf/cepstrum.hpp"
#include "spf/config.hpp"
#include "spf/pipeline.hpp"
#include "spf/pitch.hpp"
#include "spf/resample.hpp"
#include "spf/rng.hpp"
#include "spf/stft.hpp"
#include "spf/synth.hpp"
#include "spf/tensor_io.hpp"
#include "spf/vocoder.hpp"
#include "spf/vtlp.hpp"

namespace spf {

struct ProbeResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct ProbeReport {
  std::vector<ProbeResult> results;
  double total_seconds = 0.0;
  bool all_passed() const {
    for (const ProbeResult &r : results)
      if (!r.passed) return false;
    return !results.empty();
  }
};

namespace internal {

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double Elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

template <typename... Args>
inline std::string Format(const char *fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return std::string(buf);
}

// Mean magnitude spectrum over the interior frames [6, T-6).
inline std::vector<double> MeanSpectrum(const Matrix<double> &mag) {
  const std::size_t T = mag.rows();
  const std::size_t lo = T > 12 ? 6 : 0;
  const std::size_t hi = T > 12 ? T - 6 : T;
  std::vector<double> mean(mag.cols(), 0.0);
  for (std::size_t t = lo; t < hi; ++t)
    for (std::size_t k = 0; k < mag.cols(); ++k) mean[k] += mag(t, k);
  for (double &v : mean) v /= static_cast<double>(hi - lo);
  return mean;
}

// Parabolic refinement of a peak at integer bin k.
inline double RefinePeak(const std::vector<double> &v, std::size_t k) {
  if (k == 0 || k + 1 >= v.size()) return static_cast<double>(k);
  const double den = v[k - 1] - 2.0 * v[k] + v[k + 1];
  if (std::abs(den) < 1e-30) return static_cast<double>(k);
  double d = 0.5 * (v[k - 1] - v[k + 1]) / den;
  d = std::clamp(d, -1.0, 1.0);
  return static_cast<double>(k) + d;
}

// Refined position of the largest peak within [center - window, center + window].
inline double PeakNear(const std::vector<double> &spec, double center_bin, int window) {
  const long lo = std::max(1L, std::lround(center_bin) - window);
  const long hi = std::min(static_cast<long>(spec.size()) - 2, std::lround(center_bin) + window);
  long best = lo;
  for (long k = lo; k <= hi; ++k)
    if (spec[static_cast<std::size_t>(k)] > spec[static_cast<std::size_t>(best)]) best = k;
  return RefinePeak(spec, static_cast<std::size_t>(best));
}

// Framewise relative distance between two equally shaped feature matrices:
// ||a_t - b_t|| / max(||a_t||, ||b_t||), reported as (mean, max) over rows.
inline std::pair<double, double> RelMetric(const Matrix<double> &a, const Matrix<double> &b,
                                           std::size_t row_lo, std::size_t row_hi) {
  double sum = 0.0, worst = 0.0;
  std::size_t count = 0;
  for (std::size_t t = row_lo; t < row_hi; ++t) {
    double d = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double diff = a(t, k) - b(t, k);
      d += diff * diff;
      na += a(t, k) * a(t, k);
      nb += b(t, k) * b(t, k);
    }
    const double den = std::sqrt(std::max(na, nb));
    const double r = den > 0.0 ? std::sqrt(d) / den : 0.0;
    sum += r;
    worst = std::max(worst, r);
    ++count;
  }
  return {count ? sum / static_cast<double>(count) : 0.0, worst};
}

// Fraction of cepstral energy at quefrencies |q| <= n_keep, averaged over
// interior frames.  include_dc keeps q = 0 in both numerator and denominator;
// excluding it measures spectral shape independent of overall gain.
inline double LowQuefrencyRatio(const MagnitudeSpectrogram &mag, int n_keep, bool include_dc) {
  const Cepstrum c = RealCepstrumOfMagnitude(mag);
  const std::size_t T = c.data.rows();
  const std::size_t N = c.data.cols();
  const std::size_t lo = T > 12 ? 6 : 0;
  const std::size_t hi = T > 12 ? T - 6 : T;
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t t = lo; t < hi; ++t) {
    double low = include_dc ? c.data(t, 0) * c.data(t, 0) : 0.0;
    double total = low;
    for (std::size_t q = 1; q < N; ++q) {
      const double e = c.data(t, q) * c.data(t, q);
      total += e;
      const std::size_t qq = std::min(q, N - q);
      if (qq <= static_cast<std::size_t>(n_keep)) low += e;
    }
    acc += total > 0.0 ? low / total : 1.0;
    ++count;
  }
  return count ? acc / static_cast<double>(count) : 1.0;
}

// Std (cents) of the refined fundamental-peak track inside a frequency band.
inline double PeakTrackStdCents(const MagnitudeSpectrogram &mag, double f_lo, double f_hi,
                                const FrameConfig &cfg) {
  const double bw = cfg.bin_hz(1);
  const std::size_t lo_bin = static_cast<std::size_t>(std::ceil(f_lo / bw));
  const std::size_t hi_bin = std::min(mag.data.cols() - 1, static_cast<std::size_t>(f_hi / bw));
  const std::size_t T = mag.data.rows();
  const std::size_t t_lo = T > 12 ? 6 : 0;
  const std::size_t t_hi = T > 12 ? T - 6 : T;
  std::vector<double> cents;
  for (std::size_t t = t_lo; t < t_hi; ++t) {
    std::size_t best = lo_bin;
    for (std::size_t k = lo_bin; k <= hi_bin; ++k)
      if (mag.data(t, k) > mag.data(t, best)) best = k;
    std::vector<double> row(mag.data.cols());
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = mag.data(t, k);
    const double pos = RefinePeak(row, best);
    if (pos > 0.0) cents.push_back(1200.0 * std::log2(pos * bw));
  }
  if (cents.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : cents) mean += v;
  mean /= static_cast<double>(cents.size());
  double var = 0.0;
  for (double v : cents) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(cents.size()));
}

inline double SpectralCentroidHz(const MagnitudeSpectrogram &mag, const FrameConfig &cfg) {
  const std::vector<double> mean = MeanSpectrum(mag.data);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < mean.size(); ++k) {
    num += cfg.bin_hz(static_cast<int>(k)) * mean[k];
    den += mean[k];
  }
  return den > 0.0 ? num / den : 0.0;
}

inline double Snr(const std::vector<double> &ref, const std::vector<double> &test) {
  const std::size_t n = std::min(ref.size(), test.size());
  double sig = 0.0, err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sig += ref[i] * ref[i];
    const double d = ref[i] - test[i];
    err += d * d;
  }
  if (err <= 0.0) return 1e9;
  return 10.0 * std::log10(sig / err);
}

// Constant-parameter vocoder synthesis from a shared envelope, so two signals
// can differ in pitch and nothing else.
inline std::vector<double> SynthesizeFlatVowel(double f0_hz, double dur_s, double ap_level,
                                               const FrameConfig &cfg,
                                               std::uint64_t noise_seed = kDefaultSynthesisSeed) {
  const std::size_t n = static_cast<std::size_t>(dur_s * cfg.sample_rate);
  const std::size_t T = FrameConfig(cfg).num_frames(n);
  const std::vector<double> H = DefaultFormantEnvelope(cfg);
  PitchContour p;
  p.hop = cfg.hop_length;
  p.f0.assign(T, f0_hz);
  p.voiced.assign(T, true);
  Aperiodicity ap;
  ap.ap = Matrix<double>(T, kNumBands, ap_level);
  SpectralEnvelope env;
  env.env = Matrix<double>(T, H.size());
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t k = 0; k < H.size(); ++k) env.env(t, k) = 40.0 * H[k];
  return Synthesize(p, ap, env, n, cfg, noise_seed);
}

inline bool ReadFileBytes(const std::filesystem::path &p, std::string *out) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return false;
  out->assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return true;
}

// Byte-level comparison of two directory trees.
inline bool TreesIdentical(const std::string &dir_a, const std::string &dir_b, std::string *why) {
  namespace fs = std::filesystem;
  std::vector<std::string> rel_a, rel_b;
  for (const auto &e : fs::recursive_directory_iterator(dir_a))
    if (e.is_regular_file()) rel_a.push_back(fs::relative(e.path(), dir_a).generic_string());
  for (const auto &e : fs::recursive_directory_iterator(dir_b))
    if (e.is_regular_file()) rel_b.push_back(fs::relative(e.path(), dir_b).generic_string());
  std::sort(rel_a.begin(), rel_a.end());
  std::sort(rel_b.begin(), rel_b.end());
  if (rel_a != rel_b) {
    *why = Format("file sets differ (%zu vs %zu files)", rel_a.size(), rel_b.size());
    return false;
  }
  for (const std::string &rel : rel_a) {
    std::string ba, bb;
    if (!ReadFileBytes(fs::path(dir_a) / rel, &ba) || !ReadFileBytes(fs::path(dir_b) / rel, &bb)) {
      *why = "unreadable file " + rel;
      return false;
    }
    if (ba != bb) {
      *why = "bytes differ in " + rel;
      return false;
    }
  }
  *why = Format("%zu files identical", rel_a.size());
  return true;
}

}  // namespace internal

// 1. Monotonization flattens tone movements.
inline ProbeResult ProbePitchRemoval(const Config &cfg) {
  internal::Stopwatch sw;
  ProbeResult r{1, "pitch_removal"};
  const FrameConfig fc = cfg.frame();
  const std::vector<double> H = DefaultFormantEnvelope(fc);
  const std::vector<double> x = MakeVowel(220.0, 2.0, H, fc, -30.0, 50.0, 5.0);

  const PitchContour p = EstimateF0(x, fc, cfg.f0_min, cfg.f0_max, cfg.voicing_threshold);
  const PitchContour flat = SmoothPitch(p);
  double spread = 0.0;
  double first = -1.0;
  for (std::size_t t = 0; t < flat.size(); ++t) {
    if (!flat.voiced[t]) continue;
    if (first < 0.0) first = flat.f0[t];
    spread = std::max(spread, std::abs(flat.f0[t] - first));
  }

  const std::vector<double> mono = Monotonize(x, fc);
  const PitchContour p2 = EstimateF0(mono, fc, cfg.f0_min, cfg.f0_max, cfg.voicing_threshold);
  const double std_cents = CentsStd(p2);

  r.seconds = sw.Elapsed();
  r.passed = std_cents < 10.0 && spread == 0.0 && r.seconds < 5.0;
  r.detail = internal::Format(
      "reanalyzed voiced f0 std %.2f cents (< 10); smoothed contour spread %.1e Hz (== 0); %.2fs (< 5)",
      std_cents, spread, r.seconds);
  return r;
}

// 2. Warp direction moves formant peaks the right way; alpha = 1 is identity.
inline ProbeResult ProbeVtlpDirection(const Config &cfg) {
  internal::Stopwatch sw;
  ProbeResult r{2, "vtlp_direction"};
  const FrameConfig fc = cfg.frame();
  const std::vector<double> H = DefaultFormantEnvelope(fc);
  const std::vector<double> x = MakeVowel(220.0, 1.0, H, fc);
  const MagnitudeSpectrogram mag = Spectrogram(x, fc);

  WarpFactor w;
  w.alpha = 1.0;
  const MagnitudeSpectrogram same = VtlpWarp(mag, w, cfg.warp());
  double max_diff = 0.0;
  for (std::size_t i = 0; i < mag.data.data().size(); ++i)
    max_diff = std::max(max_diff, std::abs(mag.data.data()[i] - same.data.data()[i]));

  w.alpha = 0.9;
  const MagnitudeSpectrogram down = VtlpWarp(mag, w, cfg.warp());
  w.alpha = 1.1;
  const MagnitudeSpectrogram up = VtlpWarp(mag, w, cfg.warp());

  const std::vector<double> base_spec = internal::MeanSpectrum(mag.data);
  const std::vector<double> down_spec = internal::MeanSpectrum(down.data);
  const std::vector<double> up_spec = internal::MeanSpectrum(up.data);
  bool moved = true;
  std::string peaks;
  for (double expected : {48.0, 80.0, 160.0}) {
    const double p0 = internal::PeakNear(base_spec, expected, 12);
    const double pd = internal::PeakNear(down_spec, expected * 0.9, 12);
    const double pu = internal::PeakNear(up_spec, expected * 1.1, 12);
    moved = moved && pd < p0 - 0.5 && pu > p0 + 0.5;
    peaks += internal::Format(" [%.1f -> %.1f/%.1f]", p0, pd, pu);
  }

  r.seconds = sw.Elapsed();
  r.passed = moved && max_diff <= 1e-9 && r.seconds < 2.0;
  r.detail = internal::Format("peak bins base -> a0.9/a1.1:%s; identity max diff %.1e (<= 1e-9); %.2fs (< 2)",
                              peaks.c_str(), max_diff, r.seconds);
  return r;
}

// 3. Warp factor draws are uniform on [0.9, 1.1].
inline ProbeResult ProbeAlphaDistribution(const Config &cfg) {
  internal::Stopwatch sw;
  ProbeResult r{3, "alpha_distribution"};
  (void)cfg;
  Rng rng(2026);
  const int kDraws = 100000;
  double sum = 0.0;
  bool in_range = true;
  for (int i = 0; i < kDraws; ++i) {
    const WarpFactor w = SampleAlpha(&rng);
    in_range = in_range && w.alpha >= kAlphaMin && w.alpha <= kAlphaMax;
    sum += w.alpha;
  }
  const double mean = sum / kDraws;
  r.seconds = sw.Elapsed();
  r.passed = in_range && mean >= 0.995 && mean <= 1.005;
  r.detail = internal::Format("%d draws all in [0.9, 1.1]: %s; mean %.5f (in [0.995, 1.005])", kDraws,
                              in_range ? "yes" : "NO", mean);
  return r;
}

// 4. Lifter weights and envelope quefrency support.
inline ProbeResult ProbeLifter(const Config &cfg) {
  internal::Stopwatch sw;
  ProbeResult r{4, "lifter"};
  const FrameConfig fc = cfg.frame();
  const Lifter lifter = MakeLifter(3, fc.fft_size);
  bool weights_ok = lifter.weights.size() == static_cast<std::size_t>(fc.fft_size);
  const std::size_t N = lifter.weights.size();
  for (std::size_t i = 0; weights_ok && i < N; ++i) {
    const std::size_t q = std::min(i, N - i);
    const double expect = q < 3 ? 1.0 : (q == 3 ? 0.5 : 0.0);
    weights_ok = lifter.weights[i] == expect;
  }

  const std::vector<double> H = DefaultFormantEnvelope(fc);
  const std::vector<double> x = MakeVowel(220.0, 1.0, H, fc);
  const MagnitudeSpectrogram mag = Spectrogram(x, fc);
  const MagnitudeSpectrogram env =
      EnvelopeFromCepstrum(LifterCepstrum(RealCepstrumOfMagnitude(mag), lifter));
  const Cepstrum c2 = RealCepstrumOfMagnitude(env);

  Rng rng(77);
  double worst = 1.0;
  const std::size_t T = c2.data.rows();
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t t = static_cast<std::size_t>(rng.UniformInt(6, static_cast<int>(T) - 7));
    double low = 0.0, total = 0.0;
    for (std::size_t q = 0; q < c2.data.cols(); ++q) {
      const double e = c2.data(t, q) * c2.data(t, q);
      total += e;
      if (std::min(q, c2.data.cols() - q) <= 3) low += e;
    }
    worst = std::min(worst, total > 0.0 ? low / total : 1.0);
  }

  r.seconds = sw.Elapsed();
  r.passed = weights_ok && worst >= 0.99;
  r.detail = internal::Format("weights [1,1,1,0.5,0,...] mirrored: %s; envelope cepstral energy in q<=3: "
                              "min %.6f over 10 frames (>= 0.99)",
                              weights_ok ? "yes" : "NO", worst);
  return r;
}

// 5. The liftered envelope features barely see pitch; raw spectrograms do.
inline ProbeResult ProbeEnvelopeDiscardsPitch(const Config &cfg) {
  internal::Stopwatch sw;
  ProbeResult r{5, "envelope_discards_pitch"};
  const FrameConfig fc = cfg.frame();

  Matrix<double> feats[2], raws[2];
  const double f0s[2] = {200.0, 300.0};
  for (int i = 0; i < 2; ++i) {
    const std::vector<double> x = internal::SynthesizeFlatVowel(f0s[i], 2.0, 0.2, fc);
    raws[i] = Spectrogram(x, fc).data;
    WarpFactor w;
    w.alpha = 1.0;
    const MagnitudeSpectrogram warped = VtlpWarp(Spectrogram(Monotonize(x, fc), fc), w, cfg.warp());
    feats[i] = internal::ScaledEnvelopeFeature(internal::RhythmEnvelope(warped, cfg), cfg).data;
  }

  const std::size_t T = std::min(feats[0].rows(), feats[1].rows());
  const auto [env_mean, env_max] = internal::RelMetric(feats[0], feats[1], 6, T - 6);
  const std::size_t Tr = std::min(raws[0].rows(), raws[1].rows());
  const auto [raw_mean, raw_max] = internal::RelMetric(raws[0], raws[1], 6, Tr - 6);

  r.seconds = sw.Elapsed();
  r.passed = env_max < 0.10 && raw_mean > 0.50;
  r.detail = internal::Format(
      "rhythm features at 200 vs 300 Hz: mean %.3f, max %.3f (max < 0.10); raw spectrograms: mean %.3f (> 0.50)",
      env_mean, env_max, raw_mean);
  return r;
}

// 6. Random resampling contract.
inline ProbeResult ProbeResampleContract(const Config &cfg) {
  internal::Stopwatch sw;
  ProbeResult r{6, "resample_contract"};
  (void)cfg;
  const std::size_t T = 100, D = 5;

  FeatureSequence seq;
  seq.kind = FeatureKind::kMel;
  seq.data = Matrix<double>(T, D);
  Rng fill(5);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t k = 0; k < D; ++k) seq.data(t, k) = k == 0 ? static_cast<double>(t) : fill.NextDouble();

  ResampleConfig unit;
  unit.rate_min = 1.0;
  unit.rate_max = 1.0;
  Rng rng_a(99);
  const FeatureSequence ident = RandomResample(seq, &rng_a, unit);
  const bool identity_ok = ident.data == seq.data;

  ResampleConfig rc;
  Rng rng_b(1234), rng_c(1234);
  ResampleTrace trace;
  const FeatureSequence out1 = RandomResample(seq, &rng_b, rc, &trace);
  const FeatureSequence out2 = RandomResample(seq, &rng_c, rc);
  const bool seed_ok = out1.data == out2.data;

  double len_sum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Rng rng(DeriveSeed(9000, std::to_string(i)));
    len_sum += static_cast<double>(RandomResample(seq, &rng, rc).data.rows());
  }
  const double mean_len = len_sum / 1000.0;
  const bool length_ok = mean_len > 0.95 * T && mean_len < 1.05 * T;

  bool order_ok = true;
  double prev = -1.0;
  for (const auto &s : trace.sources) {
    const double pos = static_cast<double>(s.i0) * (1.0 - s.frac) + static_cast<double>(s.i1) * s.frac;
    order_ok = order_ok && pos >= prev - 1e-12;
    prev = pos;
  }
  for (std::size_t t = 0; t + 1 < out1.data.rows(); ++t)
    order_ok = order_ok && out1.data(t, 0) <= out1.data(t + 1, 0) + 1e-12;

  FeatureSequence hot;
  hot.kind = FeatureKind::kOnehot;
  hot.data = Matrix<double>(80, 33);
  Rng hot_rng(42);
  for (std::size_t t = 0; t < 80; ++t) hot.data(t, static_cast<std::size_t>(hot_rng.UniformInt(0, 32))) = 1.0;
  Rng rng_d(321);
  const FeatureSequence hot_out = RandomResample(hot, &rng_d, rc);
  bool onehot_ok = true;
  for (std::size_t t = 0; t < hot_out.data.rows(); ++t) {
    int ones = 0;
    for (std::size_t k = 0; k < hot_out.data.cols(); ++k) {
      const double v = hot_out.data(t, k);
      if (v == 1.0)
        ++ones;
      else if (v != 0.0)
        onehot_ok = false;
    }
    onehot_ok = onehot_ok && ones == 1;
  }

  r.seconds = sw.Elapsed();
  r.passed = identity_ok && seed_ok && length_ok && order_ok && onehot_ok;
  r.detail = internal::Format(
      "unit-rate identity %s; fixed-seed identical %s; mean length %.1f of %zu (within 5%%); order preserved "
      "%s; one-hot rows valid %s",
      identity_ok ? "yes" : "NO", seed_ok ? "yes" : "NO", mean_len, T, order_ok ? "yes" : "NO",
      onehot_ok ? "yes" : "NO");
  return r;
}

// 7. Joint resampling keeps spectral and pitch sub-vectors frame-aligned.
inline ProbeResult ProbeJointAlignment(const Config &cfg) {
  internal::Stopwatch sw;
  ProbeResult r{7, "joint_alignment"};
  (void)cfg;
  const std::size_t T = 60, D = 8;
  const int n_bins = 32;

  FeatureSequence spec;
  spec.kind = FeatureKind::kMel;
  spec.data = Matrix<double>(T, D);
  Rng fill(6);
  for (std::size_t t = 0; t < T; ++t) {
    spec.data(t, 0) = static_cast<double>(t);
    for (std::size_t k = 1; k < D; ++k) spec.data(t, k) = fill.NextDouble();
  }
  OneHotPitch pitch;
  pitch.n_bins = n_bins;
  pitch.data = Matrix<double>(T, static_cast<std::size_t>(n_bins) + 1);
  for (std::size_t t = 0; t < T; ++t) pitch.data(t, t % (n_bins + 1)) = 1.0;

  Rng rng(777);
  ResampleTrace trace;
  const PitchConverterInput joint = BuildPitchConverterInput(spec, pitch, &rng, ResampleConfig(), &trace);

  const bool width_ok = joint.data.cols() == D + static_cast<std::size_t>(n_bins) + 1 &&
                        joint.d_spec == D && joint.n_bins == n_bins;
  bool aligned = trace.sources.size() == joint.data.rows();
  for (std::size_t t = 0; aligned && t < joint.data.rows(); ++t) {
    const auto &s = trace.sources[t];
    const double expect_tag =
        static_cast<double>(s.i0) * (1.0 - s.frac) + static_cast<double>(s.i1) * s.frac;
    aligned = std::abs(joint.data(t, 0) - expect_tag) < 1e-9;
    std::size_t hot = 0;
    double best = -1.0;
    for (std::size_t k = D; k < joint.data.cols(); ++k)
      if (joint.data(t, k) > best) {
        best = joint.data(t, k);
        hot = k - D;
      }
    aligned = aligned && (hot == s.i0 % (n_bins + 1) || hot == s.i1 % (n_bins + 1));
  }

  r.seconds = sw.Elapsed();
  r.passed = width_ok && aligned;
  r.detail = internal::Format("width %zu == D + n_bins + 1 (%zu): %s; %zu frames share one source: %s",
                              joint.data.cols(), D + n_bins + 1, width_ok ? "yes" : "NO",
                              joint.data.rows(), aligned ? "yes" : "NO");
  return r;
}

// 8. Cepstrum algebra: all-pass round trip and real-valuedness.
inline ProbeResult ProbeCepstralAlgebra(const Config &cfg) {
  internal::Stopwatch sw;
  ProbeResult r{8, "cepstral_algebra"};
  const FrameConfig fc = cfg.frame();
  const std::vector<double> H = DefaultFormantEnvelope(fc);
  const std::vector<double> x = MakeVowel(220.0, 1.0, H, fc);
  const MagnitudeSpectrogram mag = Spectrogram(x, fc);

  const MagnitudeSpectrogram back = EnvelopeFromCepstrum(RealCepstrumOfMagnitude(mag));
  double worst_rel = 0.0;
  for (std::size_t t = 0; t < mag.data.rows(); ++t)
    for (std::size_t k = 0; k < mag.data.cols(); ++k) {
      const double target = std::max(mag.data(t, k), kLogFloor);
      worst_rel = std::max(worst_rel, std::abs(back.data(t, k) - target) / target);
    }

  double worst_imag = 0.0;
  std::vector<std::complex<double>> full(static_cast<std::size_t>(fc.fft_size));
  for (std::size_t t = 0; t < mag.data.rows(); ++t) {
    internal::FillEvenLogSpectrum(mag.data.row(t), static_cast<int>(mag.data.cols()), fc.fft_size, &full);
    Fft(&full, true);
    for (const std::complex<double> &v : full) worst_imag = std::max(worst_imag, std::abs(v.imag()));
  }

  r.seconds = sw.Elapsed();
  r.passed = worst_rel < 1e-6 && worst_imag < 1e-9;
  r.detail = internal::Format("all-pass envelope max relative error %.2e (< 1e-6); cepstrum imaginary "
                              "residue %.2e (< 1e-9)",
                              worst_rel, worst_imag);
  return r;
}

// 9. Analysis-synthesis round trips.
inline ProbeResult ProbeRoundTrips(const Config &cfg) {
  internal::Stopwatch sw;
  ProbeResult r{9, "round_trips"};
  const FrameConfig fc = cfg.frame();
  const std::vector<double> H = DefaultFormantEnvelope(fc);
  const std::vector<double> x = MakeVowel(220.0, 2.0, H, fc);

  std::vector<double> y = Istft(Stft(x, fc));
  y.resize(x.size());
  const double snr = internal::Snr(x, y);

  const AnalysisResult a = Analyze(x, fc, cfg.f0_min, cfg.f0_max, cfg.voicing_threshold, cfg.cepstral_order);
  const std::vector<double> z = Synthesize(a.pitch, a.aperiodicity, a.envelope, x.size(), fc);
  const PitchContour p2 = EstimateF0(z, fc, cfg.f0_min, cfg.f0_max, cfg.voicing_threshold);
  const double f0_err = std::abs(VoicedMeanF0(p2) / 220.0 - 1.0);

  const std::vector<double> spec_x = internal::MeanSpectrum(Spectrogram(x, fc).data);
  const std::vector<double> spec_z = internal::MeanSpectrum(Spectrogram(z, fc).data);
  double worst_bin = 0.0;
  std::string peaks;
  for (double expected : {48.0, 80.0, 160.0}) {
    const double px = internal::PeakNear(spec_x, expected, 12);
    const double pz = internal::PeakNear(spec_z, expected, 12);
    worst_bin = std::max(worst_bin, std::abs(px - pz));
    peaks += internal::Format(" [%.1f vs %.1f]", px, pz);
  }

  r.seconds = sw.Elapsed();
  r.passed = snr > 40.0 && f0_err <= 0.03 && worst_bin <= 1.0;
  r.detail = internal::Format("istft(stft) SNR %.0f dB (> 40); resynthesized f0 error %.2f%% (<= 3%%); "
                              "formant peaks%s max shift %.2f bins (<= 1)",
                              snr, 100.0 * f0_err, peaks.c_str(), worst_bin);
  return r;
}

// 10. End-to-end determinism on a synthetic corpus plus the four-panel figure.
inline ProbeResult ProbeDeterminismAndFigure2(const Config &cfg, const std::string &work_dir) {
  namespace fs = std::filesystem;
  internal::Stopwatch sw;
  ProbeResult r{10, "determinism_figure2"};
  const FrameConfig fc = cfg.frame();
  const std::vector<double> H = DefaultFormantEnvelope(fc);

  const fs::path corpus = fs::path(work_dir) / "corpus";
  const fs::path run1 = fs::path(work_dir) / "run1";
  const fs::path run2 = fs::path(work_dir) / "run2";
  fs::remove_all(corpus);
  fs::remove_all(run1);
  fs::remove_all(run2);

  struct Utt {
    const char *speaker;
    const char *name;
    double f0;
    double dur;
    double vib;
    std::uint64_t seed;
  };
  const Utt utts[] = {{"spk_a", "a1", 190.0, 1.20, 20.0, 7},
                      {"spk_a", "a2", 220.0, 1.10, 0.0, 8},
                      {"spk_b", "b1", 300.0, 1.15, 30.0, 9},
                      {"spk_b", "b2", 330.0, 1.25, 0.0, 10}};
  for (const Utt &u : utts) {
    fs::create_directories(corpus / u.speaker);
    const std::vector<double> x = MakeVowel(u.f0, u.dur, H, fc, -30.0, u.vib, 5.0, u.seed);
    WriteWav((corpus / u.speaker / (std::string(u.name) + ".wav")).string(), x, fc.sample_rate);
  }

  const CorpusManifest manifest = Ingest(corpus.string(), cfg);
  const RunSummary s1 = RunCorpus(manifest, cfg, run1.string(), 424242, 2);
  const RunSummary s2 = RunCorpus(manifest, cfg, run2.string(), 424242, 2);
  std::string tree_why;
  const bool trees_ok = manifest.entries.size() == 4 && s1.failures.empty() && s2.failures.empty() &&
                        s1.processed == 4 && internal::TreesIdentical(run1.string(), run2.string(), &tree_why);
  if (!s1.failures.empty()) tree_why = "run1 failure: " + s1.failures.front().second;

  const std::vector<double> xf = MakeVowel(220.0, 1.5, H, fc, -30.0, 50.0, 5.0);
  const Figure2Data fig = PlotFigure2(xf, cfg, (fs::path(work_dir) / "fig2").string());
  bool pngs_ok = true;
  for (const char *name : {"fig2a_original.png", "fig2b_monotonic.png", "fig2c_perturbed.png",
                           "fig2d_envelope.png"}) {
    const fs::path p = fs::path(work_dir) / "fig2" / name;
    pngs_ok = pngs_ok && fs::exists(p) && fs::file_size(p) > 0;
  }

  const double flat_a = internal::PeakTrackStdCents(fig.original, 150.0, 330.0, fc);
  const double flat_b = internal::PeakTrackStdCents(fig.monotonic, 150.0, 330.0, fc);
  const double cen_b = internal::SpectralCentroidHz(fig.monotonic, fc);
  const double cen_c = internal::SpectralCentroidHz(fig.perturbed, fc);
  const double q_c = internal::LowQuefrencyRatio(fig.perturbed, cfg.n_c, false);
  const double q_d = internal::LowQuefrencyRatio(fig.envelope, cfg.n_c, false);
  const bool fig_ok = flat_b < 10.0 && flat_b < 0.5 * flat_a && cen_c < cen_b && q_d >= 0.999 && q_c < 0.99;

  r.seconds = sw.Elapsed();
  r.passed = trees_ok && pngs_ok && fig_ok;
  r.detail = internal::Format(
      "two runs %s; panels: flatness %.1f -> %.1f cents (< 10), centroid %.0f -> %.0f Hz (down), "
      "envelope quefrency ratio %.4f vs %.4f (>= 0.999); pngs %s",
      tree_why.c_str(), flat_a, flat_b, cen_b, cen_c, q_c, q_d, pngs_ok ? "written" : "MISSING");
  return r;
}

inline ProbeReport RunAllProbes(const Config &cfg, const std::string &work_dir) {
  internal::Stopwatch sw;
  std::filesystem::create_directories(work_dir);
  ProbeReport report;
  report.results.push_back(ProbePitchRemoval(cfg));
  report.results.push_back(ProbeVtlpDirection(cfg));
  report.results.push_back(ProbeAlphaDistribution(cfg));
  report.results.push_back(ProbeLifter(cfg));
  report.results.push_back(ProbeEnvelopeDiscardsPitch(cfg));
  report.results.push_back(ProbeResampleContract(cfg));
  report.results.push_back(ProbeJointAlignment(cfg));
  report.results.push_back(ProbeCepstralAlgebra(cfg));
  report.results.push_back(ProbeRoundTrips(cfg));
  report.results.push_back(ProbeDeterminismAndFigure2(cfg, work_dir));
  report.total_seconds = sw.Elapsed();
  return report;
}

inline std::string FormatProbeLine(const ProbeResult &r) {
  return internal::Format("[%s] criterion %2d %-24s %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                          r.detail.c_str());
}

inline void WriteProbeReport(const ProbeReport &report, const std::string &path) {
  nlohmann::json j;
  j["all_passed"] = report.all_passed();
  j["total_seconds"] = report.total_seconds;
  j["results"] = nlohmann::json::array();
  for (const ProbeResult &r : report.results)
    j["results"].push_back({{"id", r.id},
                            {"name", r.name},
                            {"passed", r.passed},
                            {"seconds", r.seconds},
                            {"detail", r.detail}});
  AtomicWriteFile(path, j.dump(2) + "\n");
}

}  // namespace spf

#endif  // SPF_PROBES_HPP_
