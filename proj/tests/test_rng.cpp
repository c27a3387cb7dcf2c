// tests/test_rng.cpp

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

#include "spf/rng.hpp"

using spf::DeriveSeed;
using spf::Fnv1a64;
using spf::Rng;

TEST_CASE("Fnv1a64 matches reference vectors", "[rng]") {
  CHECK(Fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a64("abc") == 0xe71fa2190541574bULL);
}

TEST_CASE("DeriveSeed is stable and id-sensitive", "[rng]") {
  CHECK(DeriveSeed(42, "utt1") == 0x53433bdd9d46cb71ULL);
  CHECK(DeriveSeed(42, "utt1") == DeriveSeed(42, "utt1"));
  CHECK(DeriveSeed(42, "utt1") != DeriveSeed(42, "utt2"));
  CHECK(DeriveSeed(42, "utt1") != DeriveSeed(43, "utt1"));
}

TEST_CASE("engine produces the standard mt19937_64 sequence", "[rng]") {
  Rng rng(5489);
  CHECK(rng.NextU64() == 14514284786278117030ULL);
}

TEST_CASE("NextDouble stays in [0, 1)", "[rng]") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = rng.NextDouble();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("UniformInt covers both endpoints and stays inside", "[rng]") {
  Rng rng(2);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t v = rng.UniformInt(19, 32);
    REQUIRE(v >= 19);
    REQUIRE(v <= 32);
    seen.insert(v);
  }
  CHECK(seen.count(19) == 1);
  CHECK(seen.count(32) == 1);
  CHECK(seen.size() == 14);
}

TEST_CASE("UniformInt rejects empty ranges", "[rng]") {
  Rng rng(3);
  CHECK_THROWS_AS(rng.UniformInt(5, 4), spf::InvalidInput);
}

TEST_CASE("NextGaussian has unit moments", "[rng]") {
  Rng rng(4);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.NextGaussian();
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(std::sqrt(var) - 1.0) < 0.02);
}

TEST_CASE("identical seeds give identical streams", "[rng]") {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) REQUIRE(a.NextU64() == b.NextU64());
}
