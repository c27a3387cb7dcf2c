// tests/test_pitch.cpp

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

#include "spf/pitch.hpp"
#include "spf/synth.hpp"
#include "test_util.hpp"

using spf::EstimateF0;
using spf::FrameConfig;
using spf::PitchContour;

namespace {

std::vector<double> Sine(double f0, double dur, const FrameConfig &cfg, double amp = 0.3) {
  const std::size_t n = static_cast<std::size_t>(dur * cfg.sample_rate);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * f0 * static_cast<double>(i) / cfg.sample_rate);
  return x;
}

}  // namespace

TEST_CASE("pure tone is fully voiced at the right frequency", "[pitch]") {
  const FrameConfig cfg;
  for (double f0 : {110.0, 220.0, 440.0}) {
    const PitchContour p = EstimateF0(Sine(f0, 1.0, cfg), cfg);
    REQUIRE(p.size() == 63);
    for (std::size_t t = 0; t < p.size(); ++t) {
      REQUIRE(p.voiced[t]);
      REQUIRE(std::abs(p.f0[t] / f0 - 1.0) < 0.01);
    }
  }
}

TEST_CASE("frame count and hop metadata match the analysis grid", "[pitch]") {
  const FrameConfig cfg;
  const PitchContour p = EstimateF0(Sine(200.0, 1.0, cfg), cfg);
  CHECK(p.hop == cfg.hop_length);
  CHECK(p.size() == (16000 + 255) / 256);
}

TEST_CASE("white noise is almost entirely unvoiced", "[pitch]") {
  const FrameConfig cfg;
  const std::vector<double> x = spf_test::WhiteNoise(16000, 11, 0.2);
  const PitchContour p = EstimateF0(x, cfg);
  std::size_t voiced = 0;
  for (std::size_t t = 0; t < p.size(); ++t) voiced += p.voiced[t] ? 1 : 0;
  CHECK(static_cast<double>(voiced) / static_cast<double>(p.size()) < 0.05);
}

TEST_CASE("silence is unvoiced with zero f0", "[pitch]") {
  const FrameConfig cfg;
  const std::vector<double> x(16000, 0.0);
  const PitchContour p = EstimateF0(x, cfg);
  for (std::size_t t = 0; t < p.size(); ++t) {
    REQUIRE_FALSE(p.voiced[t]);
    REQUIRE(p.f0[t] == 0.0);
  }
}

TEST_CASE("voicing flag and positive f0 agree everywhere", "[pitch]") {
  const FrameConfig cfg;
  std::vector<double> x = Sine(180.0, 0.6, cfg);
  const std::vector<double> noise = spf_test::WhiteNoise(9600, 3, 0.15);
  x.insert(x.end(), noise.begin(), noise.end());
  const PitchContour p = EstimateF0(x, cfg);
  for (std::size_t t = 0; t < p.size(); ++t) {
    REQUIRE((p.f0[t] > 0.0) == static_cast<bool>(p.voiced[t]));
    if (p.voiced[t]) {
      REQUIRE(p.f0[t] >= spf::kF0SearchMin);
      REQUIRE(p.f0[t] <= spf::kF0SearchMax);
    }
  }
}

TEST_CASE("vibrato depth is recovered", "[pitch]") {
  const FrameConfig cfg;
  const std::vector<double> H = spf::DefaultFormantEnvelope(cfg);
  const std::vector<double> x = spf::MakeVowel(220.0, 2.0, H, cfg, -30.0, 50.0);
  const PitchContour p = EstimateF0(x, cfg);
  const double spread = spf::CentsStd(p);
  // 50-cent sinusoidal vibrato has a cents std near 50/sqrt(2) ~ 35.
  CHECK(spread > 20.0);
  CHECK(spread < 50.0);
}

TEST_CASE("leading silence inherits the nearest analyzed frame", "[pitch]") {
  const FrameConfig cfg;
  const std::vector<double> x = Sine(220.0, 1.0, cfg);
  const PitchContour p = EstimateF0(x, cfg);
  // Frame 0 cannot host the full correlation window; it must still carry a
  // defined value borrowed from an analyzed neighbor.
  REQUIRE(p.voiced.front());
  REQUIRE(std::abs(p.f0.front() / 220.0 - 1.0) < 0.01);
}

TEST_CASE("octave errors are avoided on harmonic-rich tones", "[pitch]") {
  const FrameConfig cfg;
  const std::vector<double> H = spf::DefaultFormantEnvelope(cfg);
  const std::vector<double> x = spf::MakeVowel(150.0, 1.0, H, cfg);
  const PitchContour p = EstimateF0(x, cfg);
  std::size_t good = 0, voiced = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (!p.voiced[t]) continue;
    ++voiced;
    if (std::abs(p.f0[t] / 150.0 - 1.0) < 0.05) ++good;
  }
  REQUIRE(voiced > 0);
  CHECK(static_cast<double>(good) / static_cast<double>(voiced) > 0.95);
}

TEST_CASE("degenerate search ranges are rejected", "[pitch]") {
  const FrameConfig cfg;
  const std::vector<double> x = Sine(220.0, 0.2, cfg);
  CHECK_THROWS_AS(EstimateF0(x, cfg, 0.0, 800.0), spf::ConfigError);
  CHECK_THROWS_AS(EstimateF0(x, cfg, 300.0, 200.0), spf::ConfigError);
  CHECK_THROWS_AS(EstimateF0(x, cfg, 71.0, 9000.0), spf::ConfigError);
}

TEST_CASE("empty waveform is rejected", "[pitch]") {
  CHECK_THROWS_AS(EstimateF0(std::vector<double>{}, FrameConfig()), spf::InvalidInput);
}

TEST_CASE("smooth_pitch replaces voiced frames with the voiced mean", "[pitch]") {
  PitchContour p;
  p.f0 = {200.0, 220.0, 0.0, 240.0};
  p.voiced = {true, true, false, true};
  const PitchContour s = spf::SmoothPitch(p);
  REQUIRE(s.f0.size() == 4);
  CHECK(s.f0[0] == Catch::Approx(220.0).margin(1e-12));
  CHECK(s.f0[1] == Catch::Approx(220.0).margin(1e-12));
  CHECK(s.f0[2] == 0.0);
  CHECK(s.f0[3] == Catch::Approx(220.0).margin(1e-12));
  CHECK(s.voiced == p.voiced);
  CHECK_FALSE(s.all_unvoiced_warning);
}

TEST_CASE("smooth_pitch preserves the voiced mean exactly", "[pitch]") {
  spf::Rng rng(77);
  PitchContour p;
  for (int t = 0; t < 200; ++t) {
    const bool v = rng.NextDouble() < 0.7;
    p.voiced.push_back(v);
    p.f0.push_back(v ? 100.0 + 300.0 * rng.NextDouble() : 0.0);
  }
  const PitchContour s = spf::SmoothPitch(p);
  double m_in = 0.0, m_out = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (!p.voiced[t]) continue;
    m_in += p.f0[t];
    m_out += s.f0[t];
    ++n;
  }
  REQUIRE(n > 0);
  CHECK(std::abs(m_in / static_cast<double>(n) - m_out / static_cast<double>(n)) < 1e-12);
  for (std::size_t t = 1; t < s.size(); ++t)
    if (s.voiced[t] && s.voiced[t - 1]) REQUIRE(s.f0[t] == s.f0[t - 1]);
}

TEST_CASE("smooth_pitch on constant contour is the identity", "[pitch]") {
  PitchContour p;
  p.f0.assign(50, 210.0);
  p.voiced.assign(50, true);
  const PitchContour s = spf::SmoothPitch(p);
  CHECK(s.f0 == p.f0);
}

TEST_CASE("smooth_pitch flags all-unvoiced input", "[pitch]") {
  PitchContour p;
  p.f0.assign(10, 0.0);
  p.voiced.assign(10, false);
  const PitchContour s = spf::SmoothPitch(p);
  CHECK(s.all_unvoiced_warning);
  CHECK(s.f0 == p.f0);
}
