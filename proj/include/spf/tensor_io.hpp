// include/spf/tensor_io.hpp

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

#ifndef SPF_TENSOR_IO_HPP_
#define SPF_TENSOR_IO_HPP_

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "spf/common.hpp"
#include "spf/matrix.hpp"

namespace spf {

// Tensor container: magic "SPF0", format version u16, rank u16, then rank
// u64 dims, then row-major float32 payload.  All integers and floats are
// little-endian.
constexpr char kTensorMagic[4] = {'S', 'P', 'F', '0'};
constexpr std::uint16_t kTensorVersion = 1;

struct Tensor {
  std::vector<std::uint64_t> dims;
  std::vector<float> values;  // row-major
};

namespace internal {

inline void PutTensorU16(std::uint16_t v, std::string *out) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}
inline void PutTensorU64(std::uint64_t v, std::string *out) {
  for (int i = 0; i < 8; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void PutTensorF32(float v, std::string *out) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}
inline std::uint16_t GetTensorU16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}
inline std::uint64_t GetTensorU64(const unsigned char *p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = v << 8 | p[i];
  return v;
}
inline float GetTensorF32(const unsigned char *p) {
  std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
                       static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace internal

// Writes bytes to a sibling temp file and renames it into place, so readers
// never observe a partially written file.
inline void AtomicWriteFile(const std::string &path, const std::string &bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IOError("cannot open " + tmp.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw IOError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IOError("rename " + tmp.string() + " -> " + path + ": " + ec.message());
}

inline std::string SerializeTensor(const Tensor &t) {
  std::uint64_t count = 1;
  for (std::uint64_t d : t.dims) count *= d;
  if (count != t.values.size()) throw InvalidInput("SerializeTensor: dims do not match value count");
  std::string out;
  out.reserve(8 + t.dims.size() * 8 + t.values.size() * 4);
  out.append(kTensorMagic, 4);
  internal::PutTensorU16(kTensorVersion, &out);
  internal::PutTensorU16(static_cast<std::uint16_t>(t.dims.size()), &out);
  for (std::uint64_t d : t.dims) internal::PutTensorU64(d, &out);
  for (float v : t.values) internal::PutTensorF32(v, &out);
  return out;
}

inline void WriteTensor(const std::string &path, const Tensor &t) {
  AtomicWriteFile(path, SerializeTensor(t));
}

inline Tensor ReadTensor(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.size() < 8 || std::memcmp(raw.data(), kTensorMagic, 4) != 0)
    throw IOError(path + ": not a tensor file");
  const std::uint16_t version = internal::GetTensorU16(raw.data() + 4);
  if (version != kTensorVersion) throw IOError(path + ": unsupported tensor format version");
  const std::uint16_t rank = internal::GetTensorU16(raw.data() + 6);
  std::size_t pos = 8;
  if (raw.size() < pos + static_cast<std::size_t>(rank) * 8) throw IOError(path + ": truncated dims");
  Tensor t;
  std::uint64_t count = 1;
  for (int i = 0; i < rank; ++i) {
    t.dims.push_back(internal::GetTensorU64(raw.data() + pos));
    count *= t.dims.back();
    pos += 8;
  }
  if (raw.size() != pos + count * 4) throw IOError(path + ": payload size mismatch");
  t.values.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) t.values[i] = internal::GetTensorF32(raw.data() + pos + i * 4);
  return t;
}

inline Tensor MatrixToTensor(const Matrix<double> &m) {
  Tensor t;
  t.dims = {m.rows(), m.cols()};
  t.values.resize(m.rows() * m.cols());
  for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = static_cast<float>(m.data()[i]);
  return t;
}

}  // namespace spf

#endif  // SPF_TENSOR_IO_HPP_
