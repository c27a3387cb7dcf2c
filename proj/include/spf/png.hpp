// include/spf/png.hpp

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

#ifndef SPF_PNG_HPP_
#define SPF_PNG_HPP_

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "spf/common.hpp"
#include "spf/matrix.hpp"
#include "spf/tensor_io.hpp"

namespace spf {

namespace internal {

inline void PngPutU32Be(std::uint32_t v, std::string *out) {
  out->push_back(static_cast<char>((v >> 24) & 0xff));
  out->push_back(static_cast<char>((v >> 16) & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
  out->push_back(static_cast<char>(v & 0xff));
}

inline void PngChunk(const char *type, const std::string &body, std::string *out) {
  PngPutU32Be(static_cast<std::uint32_t>(body.size()), out);
  std::string tb(type, 4);
  tb += body;
  out->append(tb);
  const std::uint32_t crc = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef *>(tb.data()), static_cast<uInt>(tb.size())));
  PngPutU32Be(crc, out);
}

}  // namespace internal

// Writes an 8-bit RGB PNG.  pixels is row-major top-to-bottom, 3 bytes per
// pixel.
inline void WritePng(const std::string &path, int width, int height,
                     const std::vector<unsigned char> &pixels) {
  if (width <= 0 || height <= 0) throw InvalidInput("WritePng: empty image");
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3)
    throw InvalidInput("WritePng: pixel buffer size mismatch");

  std::vector<unsigned char> scan;
  scan.reserve(static_cast<std::size_t>(height) * (static_cast<std::size_t>(width) * 3 + 1));
  for (int y = 0; y < height; ++y) {
    scan.push_back(0);  // filter: none
    const std::size_t base = static_cast<std::size_t>(y) * width * 3;
    scan.insert(scan.end(), pixels.begin() + static_cast<std::ptrdiff_t>(base),
                pixels.begin() + static_cast<std::ptrdiff_t>(base + static_cast<std::size_t>(width) * 3));
  }
  uLongf comp_len = compressBound(static_cast<uLong>(scan.size()));
  std::vector<unsigned char> comp(comp_len);
  if (compress2(comp.data(), &comp_len, scan.data(), static_cast<uLong>(scan.size()), 6) != Z_OK)
    throw IOError("WritePng: deflate failed");

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  internal::PngPutU32Be(static_cast<std::uint32_t>(width), &ihdr);
  internal::PngPutU32Be(static_cast<std::uint32_t>(height), &ihdr);
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // color type: truecolor
  ihdr.push_back(0);  // compression
  ihdr.push_back(0);  // filter
  ihdr.push_back(0);  // interlace
  internal::PngChunk("IHDR", ihdr, &out);
  internal::PngChunk("IDAT", std::string(reinterpret_cast<char *>(comp.data()), comp_len), &out);
  internal::PngChunk("IEND", "", &out);
  AtomicWriteFile(path, out);
}

// Dark-to-bright heat palette for spectrogram rendering.
inline std::array<unsigned char, 3> HeatColor(double v) {
  static const double anchors[5][3] = {{0.00, 0.00, 0.05},
                                       {0.23, 0.04, 0.40},
                                       {0.72, 0.18, 0.33},
                                       {0.98, 0.60, 0.18},
                                       {0.99, 0.98, 0.80}};
  const double x = std::clamp(v, 0.0, 1.0) * 4.0;
  const int i = std::min(static_cast<int>(x), 3);
  const double u = x - i;
  std::array<unsigned char, 3> rgb{};
  for (int c = 0; c < 3; ++c) {
    const double t = anchors[i][c] + (anchors[i + 1][c] - anchors[i][c]) * u;
    rgb[static_cast<std::size_t>(c)] = static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
  }
  return rgb;
}

// Renders a linear-magnitude T x F matrix as a log-magnitude (dB) image with
// time left-to-right and frequency bottom-to-top, one pixel per cell, dynamic
// range 80 dB below the matrix peak.
inline void WriteSpectrogramPng(const std::string &path, const Matrix<double> &mag,
                                double range_db = 80.0) {
  if (mag.rows() == 0 || mag.cols() == 0) throw InvalidInput("WriteSpectrogramPng: empty matrix");
  const int width = static_cast<int>(mag.rows());
  const int height = static_cast<int>(mag.cols());
  double peak = 0.0;
  for (const double v : mag.data()) peak = std::max(peak, v);
  const double top_db = 20.0 * std::log10(std::max(peak, kLogFloor));
  std::vector<unsigned char> px(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (int y = 0; y < height; ++y) {
    const std::size_t k = static_cast<std::size_t>(height - 1 - y);  // low frequency at bottom
    for (int x = 0; x < width; ++x) {
      const double db = 20.0 * std::log10(std::max(mag(static_cast<std::size_t>(x), k), kLogFloor));
      const double v = 1.0 + (db - top_db) / range_db;
      const std::array<unsigned char, 3> rgb = HeatColor(v);
      const std::size_t base = (static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)) * 3;
      px[base] = rgb[0];
      px[base + 1] = rgb[1];
      px[base + 2] = rgb[2];
    }
  }
  WritePng(path, width, height, px);
}

}  // namespace spf

#endif  // SPF_PNG_HPP_
