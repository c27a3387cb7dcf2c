// tests/test_resample.cpp

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
#include <vector>

#include "spf/resample.hpp"
#include "test_util.hpp"

using spf::FeatureKind;
using spf::FeatureSequence;
using spf::RandomResample;
using spf::ResampleConfig;
using spf::ResampleTrace;

namespace {

FeatureSequence RampSequence(std::size_t T, std::size_t D) {
  FeatureSequence seq;
  seq.data = spf::Matrix<double>(T, D);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t d = 0; d < D; ++d)
      seq.data(t, d) = static_cast<double>(t) + 1000.0 * static_cast<double>(d);
  return seq;
}

}  // namespace

TEST_CASE("unit rate reproduces the input exactly", "[resample]") {
  const FeatureSequence seq = RampSequence(100, 5);
  ResampleConfig cfg;
  cfg.rate_min = 1.0;
  cfg.rate_max = 1.0;
  spf::Rng rng(9);
  ResampleTrace trace;
  const FeatureSequence out = RandomResample(seq, &rng, cfg, &trace);
  REQUIRE(out.data.rows() == 100);
  REQUIRE(out.data.cols() == 5);
  for (std::size_t i = 0; i < out.data.data().size(); ++i)
    REQUIRE(out.data.data()[i] == seq.data.data()[i]);
  for (std::size_t r = 0; r < trace.sources.size(); ++r) {
    REQUIRE(trace.sources[r].i0 == r);
    REQUIRE(trace.sources[r].frac == 0.0);
  }
}

TEST_CASE("output length stays within the rate envelope", "[resample]") {
  const FeatureSequence seq = RampSequence(100, 3);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    spf::Rng rng(seed);
    ResampleTrace trace;
    const FeatureSequence out = RandomResample(seq, &rng, ResampleConfig(), &trace);
    REQUIRE(out.data.rows() >= 50);
    REQUIRE(out.data.rows() <= 150 + trace.rates.size());
  }
}

TEST_CASE("resampling is deterministic per seed", "[resample]") {
  const FeatureSequence seq = RampSequence(200, 8);
  spf::Rng a(123), b(123);
  ResampleTrace ta, tb;
  const FeatureSequence ya = RandomResample(seq, &a, ResampleConfig(), &ta);
  const FeatureSequence yb = RandomResample(seq, &b, ResampleConfig(), &tb);
  REQUIRE(ya.data.rows() == yb.data.rows());
  REQUIRE(ya.data.data() == yb.data.data());
  REQUIRE(ta.rates == tb.rates);
  REQUIRE(ta.segment_starts == tb.segment_starts);
}

TEST_CASE("trace replays the interpolation exactly", "[resample]") {
  const FeatureSequence seq = RampSequence(137, 6);
  spf::Rng rng(31);
  ResampleTrace trace;
  const FeatureSequence out = RandomResample(seq, &rng, ResampleConfig(), &trace);
  REQUIRE(trace.sources.size() == out.data.rows());
  REQUIRE(trace.segment_starts.size() == trace.rates.size());
  for (std::size_t r = 0; r < out.data.rows(); ++r) {
    const ResampleTrace::Source &s = trace.sources[r];
    REQUIRE(s.i1 >= s.i0);
    REQUIRE(s.i1 <= s.i0 + 1);
    REQUIRE(s.frac >= 0.0);
    REQUIRE(s.frac < 1.0 + 1e-12);
    for (std::size_t d = 0; d < 6; ++d) {
      const double expect = (1.0 - s.frac) * seq.data(s.i0, d) + s.frac * seq.data(s.i1, d);
      REQUIRE(out.data(r, d) == Catch::Approx(expect).margin(1e-12));
    }
  }
  // Segment bookkeeping: starts are strictly increasing from zero and the
  // per-segment output lengths recomputed from the rates sum to the total.
  REQUIRE(trace.segment_starts.front() == 0);
  std::size_t total = 0;
  for (std::size_t s = 0; s < trace.segment_starts.size(); ++s) {
    const std::size_t start = trace.segment_starts[s];
    const std::size_t end = s + 1 < trace.segment_starts.size() ? trace.segment_starts[s + 1] : 137;
    REQUIRE(end > start);
    const std::size_t len = end - start;
    REQUIRE(len <= 32);
    total += std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(static_cast<double>(len) * trace.rates[s])));
  }
  REQUIRE(total == out.data.rows());
}

TEST_CASE("source positions never move backwards", "[resample]") {
  const FeatureSequence seq = RampSequence(300, 1);
  for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
    spf::Rng rng(seed);
    ResampleTrace trace;
    const FeatureSequence out = RandomResample(seq, &rng, ResampleConfig(), &trace);
    double prev = -1.0;
    for (const ResampleTrace::Source &s : trace.sources) {
      const double p = static_cast<double>(s.i0) + s.frac;
      REQUIRE(p >= prev - 1e-12);
      prev = p;
    }
    for (std::size_t r = 1; r < out.data.rows(); ++r)
      REQUIRE(out.data(r, 0) >= out.data(r - 1, 0) - 1e-12);
  }
}

TEST_CASE("mean output length is unbiased over many draws", "[resample]") {
  const FeatureSequence seq = RampSequence(100, 2);
  double sum = 0.0;
  const int runs = 1000;
  for (int i = 0; i < runs; ++i) {
    spf::Rng rng(static_cast<std::uint64_t>(5000 + i));
    const FeatureSequence out = RandomResample(seq, &rng, ResampleConfig());
    sum += static_cast<double>(out.data.rows());
  }
  const double mean = sum / runs;
  CHECK(mean > 95.0);
  CHECK(mean < 105.0);
}

TEST_CASE("one-hot rows stay valid one-hot after interpolation", "[resample]") {
  FeatureSequence seq;
  seq.kind = FeatureKind::kOnehot;
  seq.data = spf::Matrix<double>(90, 16);
  for (std::size_t t = 0; t < 90; ++t) seq.data(t, t % 16) = 1.0;
  spf::Rng rng(17);
  const FeatureSequence out = RandomResample(seq, &rng, ResampleConfig());
  for (std::size_t r = 0; r < out.data.rows(); ++r) {
    int ones = 0;
    for (std::size_t d = 0; d < 16; ++d) {
      const double v = out.data(r, d);
      REQUIRE((v == 0.0 || v == 1.0));
      ones += v == 1.0 ? 1 : 0;
    }
    REQUIRE(ones == 1);
  }
}

TEST_CASE("concat kind only re-projects the one-hot block", "[resample]") {
  FeatureSequence seq;
  seq.kind = FeatureKind::kConcat;
  seq.onehot_begin = 4;
  seq.onehot_count = 8;
  seq.data = spf::Matrix<double>(80, 12);
  for (std::size_t t = 0; t < 80; ++t) {
    for (std::size_t d = 0; d < 4; ++d) seq.data(t, d) = 0.01 * static_cast<double>(t) + static_cast<double>(d);
    seq.data(t, 4 + t % 8) = 1.0;
  }
  spf::Rng rng(23);
  ResampleTrace trace;
  const FeatureSequence out = RandomResample(seq, &rng, ResampleConfig(), &trace);
  for (std::size_t r = 0; r < out.data.rows(); ++r) {
    const ResampleTrace::Source &s = trace.sources[r];
    for (std::size_t d = 0; d < 4; ++d) {
      const double expect = (1.0 - s.frac) * seq.data(s.i0, d) + s.frac * seq.data(s.i1, d);
      REQUIRE(out.data(r, d) == Catch::Approx(expect).margin(1e-12));
    }
    int ones = 0;
    for (std::size_t d = 4; d < 12; ++d) {
      REQUIRE((out.data(r, d) == 0.0 || out.data(r, d) == 1.0));
      ones += out.data(r, d) == 1.0 ? 1 : 0;
    }
    REQUIRE(ones == 1);
  }
}

TEST_CASE("short inputs still produce at least one frame per segment", "[resample]") {
  const FeatureSequence seq = RampSequence(1, 3);
  ResampleConfig cfg;
  cfg.rate_min = 0.5;
  cfg.rate_max = 0.5;
  spf::Rng rng(3);
  const FeatureSequence out = RandomResample(seq, &rng, cfg);
  REQUIRE(out.data.rows() == 1);
  for (std::size_t d = 0; d < 3; ++d) REQUIRE(out.data(0, d) == seq.data(0, d));
}

TEST_CASE("invalid inputs and configs are rejected", "[resample]") {
  spf::Rng rng(1);
  FeatureSequence empty;
  CHECK_THROWS_AS(RandomResample(empty, &rng), spf::InvalidInput);

  const FeatureSequence seq = RampSequence(10, 2);
  ResampleConfig bad;
  bad.seg_len_min = 0;
  CHECK_THROWS_AS(RandomResample(seq, &rng, bad), spf::ConfigError);
  bad = ResampleConfig();
  bad.seg_len_min = 40;
  CHECK_THROWS_AS(RandomResample(seq, &rng, bad), spf::ConfigError);
  bad = ResampleConfig();
  bad.rate_min = 0.0;
  CHECK_THROWS_AS(RandomResample(seq, &rng, bad), spf::ConfigError);
  bad = ResampleConfig();
  bad.rate_min = 2.0;
  bad.rate_max = 1.0;
  CHECK_THROWS_AS(RandomResample(seq, &rng, bad), spf::ConfigError);
}
