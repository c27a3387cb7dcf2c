// include/spf/audio_io.hpp

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

#ifndef SPF_AUDIO_IO_HPP_
#define SPF_AUDIO_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "spf/common.hpp"

namespace spf {

struct WavData {
  std::vector<double> samples;  // mono, [-1, 1]
  int sample_rate = 0;
};

namespace internal {

inline std::uint32_t ReadU32Le(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}
inline std::uint16_t ReadU16Le(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}
inline void PutU32Le(std::uint32_t v, std::string *out) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
  out->push_back(static_cast<char>((v >> 16) & 0xff));
  out->push_back(static_cast<char>((v >> 24) & 0xff));
}
inline void PutU16Le(std::uint16_t v, std::string *out) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace internal

// Reads a mono 16-bit PCM WAV file.  Anything else (other encodings, multi-
// channel, truncated containers) raises IOError with the reason.
inline WavData ReadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.size() < 12 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
      std::memcmp(raw.data() + 8, "WAVE", 4) != 0)
    throw IOError(path + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char *data_ptr = nullptr;
  std::uint32_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= raw.size()) {
    const unsigned char *hdr = raw.data() + pos;
    const std::uint32_t len = internal::ReadU32Le(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + len > raw.size()) throw IOError(path + ": truncated chunk");
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (len < 16) throw IOError(path + ": malformed fmt chunk");
      format = internal::ReadU16Le(raw.data() + body);
      channels = internal::ReadU16Le(raw.data() + body + 2);
      rate = internal::ReadU32Le(raw.data() + body + 4);
      bits = internal::ReadU16Le(raw.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_ptr = raw.data() + body;
      data_len = len;
    }
    pos = body + len + (len % 2);  // chunks are word-aligned
  }
  if (!have_fmt || data_ptr == nullptr) throw IOError(path + ": missing fmt or data chunk");
  if (format != 1) throw IOError(path + ": unsupported encoding (PCM only)");
  if (bits != 16) throw IOError(path + ": unsupported bit depth (16-bit only)");
  if (channels != 1) throw IOError(path + ": unsupported channel count (mono only)");

  WavData wav;
  wav.sample_rate = static_cast<int>(rate);
  const std::size_t n = data_len / 2;
  wav.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int16_t s =
        static_cast<std::int16_t>(internal::ReadU16Le(data_ptr + 2 * i));
    wav.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return wav;
}

inline void WriteWav(const std::string &path, const std::vector<double> &samples, int sample_rate) {
  if (sample_rate <= 0) throw InvalidInput("WriteWav: sample_rate must be positive");
  std::string out;
  out.reserve(44 + samples.size() * 2);
  const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);
  out.append("RIFF");
  internal::PutU32Le(36 + data_len, &out);
  out.append("WAVE");
  out.append("fmt ");
  internal::PutU32Le(16, &out);
  internal::PutU16Le(1, &out);  // PCM
  internal::PutU16Le(1, &out);  // mono
  internal::PutU32Le(static_cast<std::uint32_t>(sample_rate), &out);
  internal::PutU32Le(static_cast<std::uint32_t>(sample_rate) * 2, &out);
  internal::PutU16Le(2, &out);   // block align
  internal::PutU16Le(16, &out);  // bits
  out.append("data");
  internal::PutU32Le(data_len, &out);
  for (double v : samples) {
    const long s = std::lround(std::clamp(v, -1.0, 1.0) * 32767.0);
    internal::PutU16Le(static_cast<std::uint16_t>(static_cast<std::int16_t>(s)), &out);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IOError("cannot open " + path + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IOError("write failed: " + path);
}

// Windowed-sinc sample-rate conversion (Hann window, 32-tap half-width at the
// output rate's Nyquist when downsampling).
inline std::vector<double> ResampleRate(const std::vector<double> &x, int sr_in, int sr_out) {
  if (sr_in <= 0 || sr_out <= 0) throw InvalidInput("ResampleRate: rates must be positive");
  if (sr_in == sr_out) return x;
  if (x.empty()) return {};
  const double pi = 3.14159265358979323846264338327950288;
  const double ratio = static_cast<double>(sr_out) / sr_in;
  const double scale = std::min(1.0, ratio);  // anti-alias cutoff relative to input Nyquist
  const int half = 32;
  const double width = half / scale;
  const std::size_t n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(x.size()) * ratio));
  std::vector<double> y(n_out, 0.0);
  const long long n = static_cast<long long>(x.size());
  for (std::size_t j = 0; j < n_out; ++j) {
    const double t = static_cast<double>(j) / ratio;
    const long long lo = std::max<long long>(0, static_cast<long long>(std::ceil(t - width)));
    const long long hi = std::min<long long>(n - 1, static_cast<long long>(std::floor(t + width)));
    double acc = 0.0;
    for (long long i = lo; i <= hi; ++i) {
      const double u = (static_cast<double>(i) - t) * scale;
      const double sinc = std::abs(u) < 1e-12 ? 1.0 : std::sin(pi * u) / (pi * u);
      const double win = 0.5 + 0.5 * std::cos(pi * (static_cast<double>(i) - t) / width);
      acc += x[static_cast<std::size_t>(i)] * sinc * win;
    }
    y[j] = acc * scale;
  }
  return y;
}

}  // namespace spf

#endif  // SPF_AUDIO_IO_HPP_
