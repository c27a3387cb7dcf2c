// tests/test_mel.cpp

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
#include <set>

#include "spf/mel.hpp"

using spf::FrameConfig;
using spf::HzToMel;
using spf::MagnitudeScale;
using spf::MagnitudeSpectrogram;
using spf::MelFilterbank;
using spf::MelProject;
using spf::MelToHz;

namespace {

MagnitudeSpectrogram LinearMag(std::size_t T, const FrameConfig &cfg, double fill = 0.0) {
  MagnitudeSpectrogram mag;
  mag.config = cfg;
  mag.scale = MagnitudeScale::kLinear;
  mag.data = spf::Matrix<double>(T, static_cast<std::size_t>(cfg.num_bins()), fill);
  return mag;
}

}  // namespace

TEST_CASE("mel scale round trips", "[mel]") {
  for (double hz : {0.0, 90.0, 1000.0, 4800.0, 7600.0})
    CHECK(MelToHz(HzToMel(hz)) == Catch::Approx(hz).margin(1e-9));
  CHECK(HzToMel(1000.0) == Catch::Approx(999.9855).margin(0.01));
}

TEST_CASE("all-zero magnitude maps every cell to log floor", "[mel]") {
  const FrameConfig cfg;
  const spf::MelSpectrogram mel = MelProject(LinearMag(4, cfg), 80, 90.0, 7600.0);
  REQUIRE(mel.data.rows() == 4);
  REQUIRE(mel.data.cols() == 80);
  const double floor = std::log(1e-10);
  for (std::size_t t = 0; t < mel.data.rows(); ++t)
    for (std::size_t m = 0; m < mel.data.cols(); ++m) REQUIRE(mel.data(t, m) == floor);
}

TEST_CASE("single-bin tone lights only the overlapping filters", "[mel]") {
  const FrameConfig cfg;
  MagnitudeSpectrogram mag = LinearMag(1, cfg);
  const std::size_t tone_bin = 100;
  mag.data(0, tone_bin) = 1.0;

  const spf::Matrix<double> fb = MelFilterbank(cfg, 80, 90.0, 7600.0);
  std::set<std::size_t> expected;
  for (std::size_t m = 0; m < fb.rows(); ++m)
    if (fb(m, tone_bin) > 0.0) expected.insert(m);
  REQUIRE(expected.size() >= 1);
  REQUIRE(expected.size() <= 2);

  const spf::MelSpectrogram mel = MelProject(mag, 80, 90.0, 7600.0);
  const double floor = std::log(1e-10);
  std::set<std::size_t> above;
  for (std::size_t m = 0; m < mel.data.cols(); ++m)
    if (mel.data(0, m) > floor + 1e-9) above.insert(m);
  CHECK(above == expected);
}

TEST_CASE("n_mels=80 gives 80 columns", "[mel]") {
  const FrameConfig cfg;
  CHECK(MelProject(LinearMag(3, cfg, 0.5), 80, 90.0, 7600.0).data.cols() == 80);
}

TEST_CASE("fmax above Nyquist is rejected", "[mel]") {
  const FrameConfig cfg;
  CHECK_THROWS_AS(MelFilterbank(cfg, 80, 90.0, 8001.0), spf::ConfigError);
  CHECK_THROWS_AS(MelProject(LinearMag(1, cfg), 80, 90.0, 9000.0), spf::ConfigError);
}

TEST_CASE("bad filterbank parameters are rejected", "[mel]") {
  const FrameConfig cfg;
  CHECK_THROWS_AS(MelFilterbank(cfg, 0, 90.0, 7600.0), spf::ConfigError);
  CHECK_THROWS_AS(MelFilterbank(cfg, 80, 7600.0, 7600.0), spf::ConfigError);
  CHECK_THROWS_AS(MelFilterbank(cfg, 80, -1.0, 7600.0), spf::ConfigError);
}

TEST_CASE("log-scale input is rejected", "[mel]") {
  const FrameConfig cfg;
  MagnitudeSpectrogram mag = LinearMag(1, cfg, 1.0);
  mag.scale = MagnitudeScale::kLog;
  CHECK_THROWS_AS(MelProject(mag, 80, 90.0, 7600.0), spf::InvalidInput);
}

TEST_CASE("filters have unit peak and mel-ordered supports", "[mel]") {
  const FrameConfig cfg;
  const spf::Matrix<double> fb = MelFilterbank(cfg, 40, 90.0, 7600.0);
  std::size_t prev_first = 0;
  for (std::size_t m = 0; m < fb.rows(); ++m) {
    double peak = 0.0;
    std::size_t first = fb.cols();
    for (std::size_t k = 0; k < fb.cols(); ++k) {
      peak = std::max(peak, fb(m, k));
      if (fb(m, k) > 0.0 && first == fb.cols()) first = k;
    }
    REQUIRE(peak > 0.6);
    REQUIRE(peak <= 1.0);
    REQUIRE(first != fb.cols());
    REQUIRE(first >= prev_first);
    prev_first = first;
  }
}

TEST_CASE("norm-db mapping matches its closed form and clips", "[mel]") {
  CHECK(spf::LinearToNormDb(1.0, 16.0, 100.0) == Catch::Approx(0.84));
  CHECK(spf::LinearToNormDb(0.0, 16.0, 100.0) == 0.0);
  CHECK(spf::LinearToNormDb(1e9, 16.0, 100.0) == 1.0);
  const double v = 0.0371;
  CHECK(spf::LogToNormDb(std::log(v), 16.0, 100.0) ==
        Catch::Approx(spf::LinearToNormDb(v, 16.0, 100.0)).margin(1e-12));
}
