// include/spf/pitch.hpp

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

#ifndef SPF_PITCH_HPP_
#define SPF_PITCH_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spf/common.hpp"
#include "spf/matrix.hpp"
#include "spf/stft.hpp"

namespace spf {

constexpr double kF0SearchMin = 71.0;
constexpr double kF0SearchMax = 800.0;
constexpr double kVoicingThreshold = 0.45;
constexpr double kCandidateFloor = 0.85;   // candidate accepted only if r >= floor * rmax
constexpr double kHarmonicRatio = 0.75;    // lag multiples must score >= ratio * r(tau)
constexpr double kSilenceGateRatio = 0.02;  // of peak windowed RMS
constexpr double kLogF0StdFloor = 1e-3;

struct PitchContour {
  std::vector<double> f0;      // Hz, 0 where unvoiced
  std::vector<bool> voiced;
  int hop = 256;
  bool all_unvoiced_warning = false;

  std::size_t size() const { return f0.size(); }
};

namespace internal {

inline bool HarmonicOk(const std::vector<double> &rs, int tau, int lo, int hi) {
  for (int m = 2; m * tau <= hi; ++m) {
    const int target = m * tau;
    double best = -2.0;
    for (int q = std::max(lo, target - 2); q <= std::min(hi, target + 2); ++q)
      best = std::max(best, rs[static_cast<std::size_t>(q)]);
    if (best < kHarmonicRatio * rs[static_cast<std::size_t>(tau)]) return false;
  }
  return true;
}

}  // namespace internal

// Normalized-cross-correlation F0 tracker with parabolic lag refinement.
// A frame is analyzed only when its full correlation window fits inside the
// signal; frames near the edges inherit the nearest analyzed frame's result.
// Frames whose windowed RMS falls under 2% of the utterance peak are gated
// to unvoiced before any correlation is attempted.
inline PitchContour EstimateF0(const std::vector<double> &x, const FrameConfig &cfg = FrameConfig(),
                               double f_min = kF0SearchMin, double f_max = kF0SearchMax,
                               double thresh = kVoicingThreshold) {
  if (x.empty()) throw InvalidInput("EstimateF0: empty waveform");
  const double sr = cfg.sample_rate;
  if (!(f_min > 0.0 && f_min < f_max && f_max < sr / 2.0))
    throw ConfigError("EstimateF0: need 0 < f_min < f_max < Nyquist");

  const int hop = cfg.hop_length;
  const int tau_min = static_cast<int>(sr / f_max);
  const int tau_max = static_cast<int>(std::ceil(sr / f_min));
  const int W = tau_max;
  const int n = static_cast<int>(x.size());
  const int T = static_cast<int>((x.size() + static_cast<std::size_t>(hop) - 1) / static_cast<std::size_t>(hop));
  const int half = (W + tau_max) / 2;

  PitchContour p;
  p.hop = hop;
  p.f0.assign(static_cast<std::size_t>(T), 0.0);
  p.voiced.assign(static_cast<std::size_t>(T), false);
  std::vector<bool> done(static_cast<std::size_t>(T), false);

  std::vector<double> rms(static_cast<std::size_t>(T), 0.0);
  double rms_peak = 0.0;
  for (int t = 0; t < T; ++t) {
    const int c = t * hop;
    const int a = std::max(0, c - W);
    const int b = std::min(n, c + W);
    double e = 0.0;
    for (int i = a; i < b; ++i) e += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    rms[static_cast<std::size_t>(t)] = b > a ? std::sqrt(e / (b - a)) : 0.0;
    rms_peak = std::max(rms_peak, rms[static_cast<std::size_t>(t)]);
  }
  const double gate = std::max(kSilenceGateRatio * rms_peak, 1e-7);

  std::vector<double> seg(static_cast<std::size_t>(W + tau_max + 1));
  std::vector<double> rs(static_cast<std::size_t>(tau_max + 2));
  for (int t = 0; t < T; ++t) {
    const int c = t * hop;
    const int n0 = c - half;
    if (rms[static_cast<std::size_t>(t)] < gate) {
      done[static_cast<std::size_t>(t)] = true;
      continue;
    }
    if (n0 < 0 || n0 + W + tau_max + 1 > n) continue;

    const int L = W + tau_max + 1;
    double mean = 0.0;
    for (int i = 0; i < L; ++i) mean += x[static_cast<std::size_t>(n0 + i)];
    mean /= L;
    for (int i = 0; i < L; ++i) seg[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(n0 + i)] - mean;

    double ea = 0.0;
    for (int i = 0; i < W; ++i) ea += seg[static_cast<std::size_t>(i)] * seg[static_cast<std::size_t>(i)];
    if (ea < 1e-12) {
      done[static_cast<std::size_t>(t)] = true;
      continue;
    }
    std::fill(rs.begin(), rs.end(), -2.0);
    double eb = 0.0;
    for (int i = tau_min; i < tau_min + W; ++i) eb += seg[static_cast<std::size_t>(i)] * seg[static_cast<std::size_t>(i)];
    for (int tau = tau_min; tau <= tau_max; ++tau) {
      if (tau > tau_min) {
        const double drop = seg[static_cast<std::size_t>(tau - 1)];
        const double add = seg[static_cast<std::size_t>(tau - 1 + W)];
        eb += add * add - drop * drop;
      }
      if (eb > 1e-12) {
        double dot = 0.0;
        for (int i = 0; i < W; ++i)
          dot += seg[static_cast<std::size_t>(i)] * seg[static_cast<std::size_t>(tau + i)];
        rs[static_cast<std::size_t>(tau)] = dot / std::sqrt(ea * eb);
      }
    }
    done[static_cast<std::size_t>(t)] = true;

    double rmax = -2.0;
    for (int tau = tau_min; tau <= tau_max; ++tau) rmax = std::max(rmax, rs[static_cast<std::size_t>(tau)]);
    if (rmax < thresh) continue;

    int pick = -1;
    for (int tau = tau_min + 1; tau < tau_max; ++tau) {
      const double r = rs[static_cast<std::size_t>(tau)];
      if (!(r >= rs[static_cast<std::size_t>(tau - 1)] && r >= rs[static_cast<std::size_t>(tau + 1)] && r > -1.5))
        continue;
      if (r >= rmax * kCandidateFloor && internal::HarmonicOk(rs, tau, tau_min, tau_max)) {
        pick = tau;
        break;
      }
    }
    if (pick < 0) {
      pick = tau_min;
      for (int tau = tau_min; tau <= tau_max; ++tau)
        if (rs[static_cast<std::size_t>(tau)] > rs[static_cast<std::size_t>(pick)]) pick = tau;
    }
    double d = 0.0;
    const double den = rs[static_cast<std::size_t>(pick - 1)] - 2.0 * rs[static_cast<std::size_t>(pick)] +
                       rs[static_cast<std::size_t>(pick + 1)];
    if (pick > tau_min && pick < tau_max && std::abs(den) > 1e-12 &&
        rs[static_cast<std::size_t>(pick - 1)] > -1.5 && rs[static_cast<std::size_t>(pick + 1)] > -1.5)
      d = std::clamp(0.5 * (rs[static_cast<std::size_t>(pick - 1)] - rs[static_cast<std::size_t>(pick + 1)]) / den,
                     -1.0, 1.0);
    p.f0[static_cast<std::size_t>(t)] = std::clamp(sr / (pick + d), f_min, f_max);
    p.voiced[static_cast<std::size_t>(t)] = true;
  }

  for (int t = 0; t < T; ++t) {
    if (done[static_cast<std::size_t>(t)]) continue;
    int best = -1;
    for (int j = 0; j < T; ++j) {
      if (!done[static_cast<std::size_t>(j)]) continue;
      if (best < 0 || std::abs(j - t) < std::abs(best - t)) best = j;
    }
    if (best < 0) break;
    p.f0[static_cast<std::size_t>(t)] = p.f0[static_cast<std::size_t>(best)];
    p.voiced[static_cast<std::size_t>(t)] = p.voiced[static_cast<std::size_t>(best)];
  }
  return p;
}

// Replaces every voiced frame's f0 with the voiced mean; unvoiced frames and
// the voicing mask are untouched.  All-unvoiced input is returned unchanged
// with the warning flag set.
inline PitchContour SmoothPitch(const PitchContour &p) {
  PitchContour out = p;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (p.voiced[t]) {
      sum += p.f0[t];
      ++count;
    }
  }
  if (count == 0) {
    out.all_unvoiced_warning = true;
    return out;
  }
  const double mean = sum / static_cast<double>(count);
  for (std::size_t t = 0; t < out.size(); ++t)
    if (out.voiced[t]) out.f0[t] = mean;
  return out;
}

// Normalization domain: log-F0 by default; a linear-Hz mode is available.
enum class PitchDomain { kLog, kLinearHz };

struct SpeakerStats {
  std::string speaker_id;
  double log_f0_mean = 0.0;  // in linear-Hz mode these hold Hz-domain stats
  double log_f0_std = 0.0;
  std::uint64_t frame_count = 0;
};

// Welford accumulator; merge is associative so stats can be computed
// incrementally across files and combined.
struct StatsAccumulator {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void Add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  void Merge(const StatsAccumulator &o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double d = o.mean - mean;
    const std::uint64_t total = n + o.n;
    mean += d * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / static_cast<double>(total);
    n = total;
  }
  void AddContour(const PitchContour &p, PitchDomain domain = PitchDomain::kLog) {
    for (std::size_t t = 0; t < p.size(); ++t)
      if (p.voiced[t] && p.f0[t] > 0.0)
        Add(domain == PitchDomain::kLog ? std::log(p.f0[t]) : p.f0[t]);
  }
  SpeakerStats ToStats(const std::string &speaker_id, double std_floor = kLogF0StdFloor) const {
    if (n == 0) throw InsufficientData("speaker stats: no voiced frames for " + speaker_id);
    SpeakerStats s;
    s.speaker_id = speaker_id;
    s.log_f0_mean = mean;
    s.log_f0_std = std::max(std::sqrt(m2 / static_cast<double>(n)), std_floor);
    s.frame_count = n;
    return s;
  }
};

inline SpeakerStats ComputeSpeakerStats(const std::vector<PitchContour> &contours,
                                        const std::string &speaker_id,
                                        PitchDomain domain = PitchDomain::kLog,
                                        double std_floor = kLogF0StdFloor) {
  StatsAccumulator acc;
  for (const PitchContour &p : contours) acc.AddContour(p, domain);
  return acc.ToStats(speaker_id, std_floor);
}

struct NormalizedContour {
  std::vector<double> z;  // z-score of the normalized f0, 0 where unvoiced
  std::vector<bool> voiced;

  std::size_t size() const { return z.size(); }
};

inline NormalizedContour NormalizeContour(const PitchContour &p, const SpeakerStats &stats,
                                          PitchDomain domain = PitchDomain::kLog,
                                          double std_floor = kLogF0StdFloor) {
  NormalizedContour out;
  out.z.assign(p.size(), 0.0);
  out.voiced = p.voiced;
  const double sd = std::max(stats.log_f0_std, std_floor);
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (!p.voiced[t] || p.f0[t] <= 0.0) continue;
    const double v = domain == PitchDomain::kLog ? std::log(p.f0[t]) : p.f0[t];
    out.z[t] = (v - stats.log_f0_mean) / sd;
  }
  return out;
}

struct OneHotPitch {
  Matrix<double> data;  // T x (n_bins + 1); last column flags unvoiced
  int n_bins = 0;
};

inline OneHotPitch QuantizeOneHot(const NormalizedContour &c, int n_bins = 256, double z_min = -4.0,
                                  double z_max = 4.0) {
  if (n_bins < 2) throw ConfigError("QuantizeOneHot: n_bins must be >= 2");
  if (!(z_min < z_max)) throw ConfigError("QuantizeOneHot: need z_min < z_max");
  OneHotPitch out;
  out.n_bins = n_bins;
  out.data = Matrix<double>(c.size(), static_cast<std::size_t>(n_bins + 1));
  for (std::size_t t = 0; t < c.size(); ++t) {
    if (!c.voiced[t]) {
      out.data(t, static_cast<std::size_t>(n_bins)) = 1.0;
      continue;
    }
    const double z = std::clamp(c.z[t], z_min, z_max);
    int bin = static_cast<int>(std::floor((z - z_min) / (z_max - z_min) * n_bins));
    bin = std::clamp(bin, 0, n_bins - 1);
    out.data(t, static_cast<std::size_t>(bin)) = 1.0;
  }
  return out;
}

}  // namespace spf

#endif  // SPF_PITCH_HPP_
