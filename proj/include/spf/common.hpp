// include/spf/common.hpp

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

#ifndef SPF_COMMON_HPP_
#define SPF_COMMON_HPP_

#include <stdexcept>
#include <string>

namespace spf {

inline constexpr const char *kVersion = "1.0.0";

// Error hierarchy shared by every module.  Call sites catch spf::Error to
// handle any toolkit failure, or a concrete subtype for targeted recovery.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string &msg) : Error("invalid input: " + msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &msg) : Error("config error: " + msg) {}
};

class IOError : public Error {
 public:
  explicit IOError(const std::string &msg) : Error("I/O error: " + msg) {}
};

class InsufficientData : public Error {
 public:
  explicit InsufficientData(const std::string &msg) : Error("insufficient data: " + msg) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string &msg) : Error("alignment error: " + msg) {}
};

class StatsNotFound : public Error {
 public:
  explicit StatsNotFound(const std::string &msg) : Error("stats not found: " + msg) {}
};

// Magnitude floor applied before every log() on spectra; keeps silence
// frames finite.
inline constexpr double kLogFloor = 1e-10;

}  // namespace spf

#endif  // SPF_COMMON_HPP_
