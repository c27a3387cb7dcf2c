// include/spf/rng.hpp

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

#ifndef SPF_RNG_HPP_
#define SPF_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "spf/common.hpp"

namespace spf {

// 64-bit FNV-1a over an arbitrary byte string.
inline std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

// Derived per-utterance seed: adding or removing other utterances never
// perturbs this utterance's stream.
inline std::uint64_t DeriveSeed(std::uint64_t master_seed, std::string_view utterance_id) {
  std::uint64_t h = Fnv1a64(utterance_id);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((master_seed >> (8 * i)) & 0xff);
  return Fnv1a64(std::string_view(buf, 8), h);
}

// Deterministic random stream.  The engine is std::mt19937_64, whose output
// sequence is pinned by the C++ standard; all mappings from raw 64-bit words
// to doubles/ranges are written out explicitly because the standard
// distribution adaptors are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double NextDouble() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }

  // Uniform double in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * NextDouble(); }

  // Uniform integer in [0, bound) via Lemire's multiply-shift rejection.
  std::uint64_t NextBounded(std::uint64_t bound) {
    if (bound == 0) throw InvalidInput("NextBounded: bound must be positive");
    std::uint64_t x = engine_();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    std::uint64_t l = static_cast<std::uint64_t>(m);
    if (l < bound) {
      std::uint64_t t = (-bound) % bound;
      while (l < t) {
        x = engine_();
        m = static_cast<__uint128_t>(x) * bound;
        l = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw InvalidInput("UniformInt: empty range");
    return lo + static_cast<std::int64_t>(NextBounded(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Standard normal via Box-Muller; caches the second value of each pair.
  double NextGaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = NextDouble();
    double u2 = NextDouble();
    while (u1 <= 0.0) u1 = NextDouble();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace spf

#endif  // SPF_RNG_HPP_
