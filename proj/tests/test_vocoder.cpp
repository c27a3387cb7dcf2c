// tests/test_vocoder.cpp

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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "spf/synth.hpp"
#include "spf/vocoder.hpp"
#include "test_util.hpp"

using spf::Analyze;
using spf::AnalysisResult;
using spf::Aperiodicity;
using spf::CepstralEnvelope;
using spf::FrameConfig;
using spf::Monotonize;
using spf::PitchContour;
using spf::SpectralEnvelope;
using spf::Synthesize;

namespace {

std::vector<double> Vowel(double f0, double dur, const FrameConfig &cfg, double vib_cents = 0.0) {
  return spf::MakeVowel(f0, dur, spf::DefaultFormantEnvelope(cfg), cfg, -30.0, vib_cents);
}

long PeakNear(const std::vector<double> &v, long center, long window) {
  long best = std::max(0L, center - window);
  const long hi = std::min(static_cast<long>(v.size()) - 1, center + window);
  for (long k = best; k <= hi; ++k)
    if (v[static_cast<std::size_t>(k)] > v[static_cast<std::size_t>(best)]) best = k;
  return best;
}

std::vector<double> MeanRows(const spf::Matrix<double> &m, std::size_t lo, std::size_t hi) {
  std::vector<double> mean(m.cols(), 0.0);
  for (std::size_t t = lo; t < hi; ++t)
    for (std::size_t k = 0; k < m.cols(); ++k) mean[k] += m(t, k);
  return mean;
}

}  // namespace

TEST_CASE("envelope peaks sit on the synthetic formants", "[vocoder]") {
  const FrameConfig cfg;
  const std::vector<double> H = spf::DefaultFormantEnvelope(cfg);

  // Comb-free oracle: a constant spectrogram equal to the formant curve.
  spf::MagnitudeSpectrogram flat;
  flat.config = cfg;
  flat.data = spf::Matrix<double>(12, H.size());
  for (std::size_t t = 0; t < flat.data.rows(); ++t)
    for (std::size_t k = 0; k < H.size(); ++k) flat.data(t, k) = H[k];
  const std::vector<double> fmean = MeanRows(CepstralEnvelope(flat).env, 0, 12);
  for (long bin : {48L, 80L, 160L}) REQUIRE(std::abs(PeakNear(fmean, bin, 12) - bin) <= 1);

  // A vowel samples the curve on its harmonic comb, so the apparent peak can
  // sit up to half a harmonic away from the formant center.
  const AnalysisResult a = Analyze(Vowel(220.0, 1.0, cfg), cfg);
  const std::vector<double> mean = MeanRows(a.envelope.env, 6, a.envelope.env.rows() - 6);
  const long half = std::lround(0.5 * 220.0 / cfg.bin_hz(1)) + 1;
  for (long bin : {48L, 80L, 160L}) REQUIRE(std::abs(PeakNear(mean, bin, 12) - bin) <= half);
}

TEST_CASE("envelope carries the frame power", "[vocoder]") {
  const FrameConfig cfg;
  const std::vector<double> x = Vowel(200.0, 0.8, cfg);
  const spf::MagnitudeSpectrogram mag = spf::Spectrogram(x, cfg);
  const SpectralEnvelope env = CepstralEnvelope(mag);
  for (std::size_t t = 0; t < mag.data.rows(); ++t) {
    double e_env = 0.0, e_mag = 0.0;
    for (std::size_t k = 0; k < mag.data.cols(); ++k) {
      e_env += env.env(t, k) * env.env(t, k);
      e_mag += mag.data(t, k) * mag.data(t, k);
    }
    REQUIRE(e_env == Catch::Approx(e_mag).epsilon(1e-6));
  }
}

TEST_CASE("envelope is strictly positive even on silence", "[vocoder]") {
  const FrameConfig cfg;
  const SpectralEnvelope env = CepstralEnvelope(spf::Spectrogram(std::vector<double>(8192, 0.0), cfg));
  for (double v : env.env.data()) REQUIRE(v == spf::kLogFloor);
  const SpectralEnvelope noisy =
      CepstralEnvelope(spf::Spectrogram(spf_test::WhiteNoise(8192, 5), cfg));
  for (double v : noisy.env.data()) REQUIRE(v > 0.0);
}

TEST_CASE("cepstral order bounds are enforced", "[vocoder]") {
  const FrameConfig cfg;
  const spf::MagnitudeSpectrogram mag = spf::Spectrogram(Vowel(220.0, 0.2, cfg), cfg);
  CHECK_THROWS_AS(CepstralEnvelope(mag, 1), spf::ConfigError);
  CHECK_THROWS_AS(CepstralEnvelope(mag, 512), spf::ConfigError);
  CHECK_NOTHROW(CepstralEnvelope(mag, 511));
}

TEST_CASE("aperiodicity is low for a pure tone and one for unvoiced frames", "[vocoder]") {
  const FrameConfig cfg;
  std::vector<double> x(16000);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = 0.3 * std::sin(2.0 * std::numbers::pi * 220.0 * static_cast<double>(i) / cfg.sample_rate);
  const AnalysisResult a = Analyze(x, cfg);
  double band0 = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 6; t + 6 < a.aperiodicity.ap.rows(); ++t) {
    REQUIRE(a.pitch.voiced[t]);
    band0 += a.aperiodicity.ap(t, 0);
    ++n;
  }
  CHECK(band0 / static_cast<double>(n) < 0.15);
  for (double v : a.aperiodicity.ap.data()) {
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
  }

  PitchContour uv;
  uv.f0.assign(8, 0.0);
  uv.voiced.assign(8, false);
  const Aperiodicity ap = spf::ComputeAperiodicity(x, uv, cfg);
  for (double v : ap.ap.data()) REQUIRE(v == 1.0);
}

TEST_CASE("synthesis of an all-zero envelope is exactly zero", "[vocoder]") {
  const FrameConfig cfg;
  PitchContour p;
  p.f0.assign(20, 220.0);
  p.voiced.assign(20, true);
  Aperiodicity ap;
  ap.ap = spf::Matrix<double>(20, 4, 0.2);
  SpectralEnvelope env;
  env.env = spf::Matrix<double>(20, 513, 0.0);
  const std::vector<double> y = Synthesize(p, ap, env, 20 * 256, cfg);
  REQUIRE(y.size() == 20 * 256);
  for (double v : y) REQUIRE(v == 0.0);
}

TEST_CASE("synthesis validates frame counts and shapes", "[vocoder]") {
  const FrameConfig cfg;
  PitchContour p;
  p.f0.assign(10, 200.0);
  p.voiced.assign(10, true);
  Aperiodicity ap;
  ap.ap = spf::Matrix<double>(10, 4, 0.1);
  SpectralEnvelope env;
  env.env = spf::Matrix<double>(10, 513, 1.0);

  PitchContour empty;
  CHECK_THROWS_AS(Synthesize(empty, ap, env, 2560, cfg), spf::InvalidInput);

  Aperiodicity bad_rows;
  bad_rows.ap = spf::Matrix<double>(9, 4, 0.1);
  CHECK_THROWS_AS(Synthesize(p, bad_rows, env, 2560, cfg), spf::InvalidInput);

  Aperiodicity bad_bands;
  bad_bands.ap = spf::Matrix<double>(10, 5, 0.1);
  CHECK_THROWS_AS(Synthesize(p, bad_bands, env, 2560, cfg), spf::InvalidInput);

  SpectralEnvelope bad_bins;
  bad_bins.env = spf::Matrix<double>(10, 512, 1.0);
  CHECK_THROWS_AS(Synthesize(p, ap, bad_bins, 2560, cfg), spf::InvalidInput);
}

TEST_CASE("synthesis reproduces a constant pitch within ten cents", "[vocoder]") {
  const FrameConfig cfg;
  const std::size_t T = 120;
  PitchContour p;
  p.f0.assign(T, 220.0);
  p.voiced.assign(T, true);
  Aperiodicity ap;
  ap.ap = spf::Matrix<double>(T, 4, 0.2);
  const std::vector<double> H = spf::DefaultFormantEnvelope(cfg);
  SpectralEnvelope env;
  env.env = spf::Matrix<double>(T, 513);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t k = 0; k < 513; ++k) env.env(t, k) = 40.0 * H[k];
  const std::vector<double> y = Synthesize(p, ap, env, T * 256, cfg);
  const PitchContour q = spf::EstimateF0(y, cfg);
  CHECK(spf::VoicedFraction(q) > 0.9);
  CHECK(std::abs(spf::VoicedMeanF0(q) / 220.0 - 1.0) < 0.03);
  CHECK(spf::CentsStd(q) < 10.0);
}

TEST_CASE("analysis and synthesis round-trip pitch and formants", "[vocoder]") {
  const FrameConfig cfg;
  const std::vector<double> x = Vowel(220.0, 2.0, cfg);
  const AnalysisResult a = Analyze(x, cfg);
  const std::vector<double> y = Synthesize(a.pitch, a.aperiodicity, a.envelope, x.size(), cfg);
  REQUIRE(y.size() == x.size());
  for (double v : y) REQUIRE(std::isfinite(v));

  const PitchContour q = spf::EstimateF0(y, cfg);
  CHECK(std::abs(spf::VoicedMeanF0(q) / spf::VoicedMeanF0(a.pitch) - 1.0) < 0.03);

  // Input and resynthesis share the same harmonic comb, so their apparent
  // peaks line up even though the comb offsets both from the formant centers.
  const spf::MagnitudeSpectrogram mx = spf::Spectrogram(x, cfg);
  const spf::MagnitudeSpectrogram my = spf::Spectrogram(y, cfg);
  const std::vector<double> meanx = MeanRows(mx.data, 6, mx.data.rows() - 6);
  const std::vector<double> meany = MeanRows(my.data, 6, my.data.rows() - 6);
  for (long bin : {48L, 80L, 160L})
    CHECK(std::abs(PeakNear(meany, bin, 12) - PeakNear(meanx, bin, 12)) <= 2);
}

TEST_CASE("monotonize flattens vibrato to under ten cents", "[vocoder]") {
  const FrameConfig cfg;
  const std::vector<double> x = Vowel(220.0, 2.0, cfg, 50.0);
  REQUIRE(spf::CentsStd(spf::EstimateF0(x, cfg)) > 20.0);
  const std::vector<double> y = Monotonize(x, cfg);
  REQUIRE(y.size() == x.size());
  const PitchContour q = spf::EstimateF0(y, cfg);
  CHECK(spf::VoicedFraction(q) > 0.8);
  CHECK(spf::CentsStd(q) < 10.0);
}

TEST_CASE("monotonize is near-transparent on already flat pitch", "[vocoder]") {
  const FrameConfig cfg;
  const std::vector<double> x = Vowel(220.0, 1.5, cfg);
  const std::vector<double> y = Monotonize(x, cfg);
  const spf::MagnitudeSpectrogram mx = spf::Spectrogram(x, cfg);
  const spf::MagnitudeSpectrogram my = spf::Spectrogram(y, cfg);
  // Above 4 kHz the resynthesis noise band dominates the -50 dB envelope
  // floor with fresh phases, so the tight bound covers the formant band.
  std::vector<double> lx, ly, bx, by;
  for (std::size_t t = 6; t + 6 < mx.data.rows(); ++t)
    for (std::size_t k = 0; k < mx.data.cols(); ++k) {
      lx.push_back(std::log(std::max(mx.data(t, k), spf::kLogFloor)));
      ly.push_back(std::log(std::max(my.data(t, k), spf::kLogFloor)));
      if (k < 256) {
        bx.push_back(lx.back());
        by.push_back(ly.back());
      }
    }
  CHECK(spf_test::Pearson(bx, by) > 0.95);
  CHECK(spf_test::Pearson(lx, ly) > 0.85);
}

TEST_CASE("monotonize preserves the energy contour", "[vocoder]") {
  const FrameConfig cfg;
  std::vector<double> x = Vowel(200.0, 0.6, cfg, 30.0);
  std::vector<double> loud = Vowel(240.0, 0.6, cfg, 30.0);
  for (double &v : loud) v *= 2.5;
  x.insert(x.end(), loud.begin(), loud.end());
  const std::vector<double> y = Monotonize(x, cfg);

  const std::vector<double> ex = spf_test::EnergyContour(x, cfg);
  const std::vector<double> ey = spf_test::EnergyContour(y, cfg);
  REQUIRE(ex.size() == ey.size());
  double peak = 0.0;
  for (double v : ex) peak = std::max(peak, v);
  std::vector<double> ax, ay;
  for (std::size_t t = 6; t + 6 < ex.size(); ++t) {
    if (ex[t] < 0.1 * peak) continue;
    ax.push_back(ex[t]);
    ay.push_back(ey[t]);
    REQUIRE(std::abs(ey[t] / ex[t] - 1.0) < 0.25);
  }
  REQUIRE(ax.size() > 20);
  CHECK(spf_test::Pearson(ax, ay) > 0.8);
}

TEST_CASE("analysis hash tracks parameters", "[vocoder]") {
  const FrameConfig cfg;
  const std::vector<double> x = Vowel(220.0, 0.3, cfg);
  const AnalysisResult a = Analyze(x, cfg);
  const AnalysisResult b = Analyze(x, cfg);
  const AnalysisResult c = Analyze(x, cfg, spf::kF0SearchMin, spf::kF0SearchMax,
                                   spf::kVoicingThreshold, 40);
  CHECK(a.config_hash == b.config_hash);
  CHECK(a.config_hash != c.config_hash);
}
