// include/spf/config.hpp

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

#ifndef SPF_CONFIG_HPP_
#define SPF_CONFIG_HPP_

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spf/common.hpp"
#include "spf/resample.hpp"
#include "spf/rng.hpp"
#include "spf/stft.hpp"
#include "spf/vtlp.hpp"

namespace spf {

enum class FeatureScale { kNormDb, kLinear };
enum class PitchStatsMode { kPerSpeaker, kPerUtterance };

// Every named default across the toolkit, loadable from a plain key=value
// file.  Unknown keys and malformed values are hard errors.
struct Config {
  // framing
  int sample_rate = 16000;
  int frame_length = 1024;
  int hop_length = 256;
  int fft_size = 1024;
  std::string window = "hann";  // hann | rect

  // mel projection
  int n_mels = 80;
  double mel_fmin = 90.0;
  double mel_fmax = 7600.0;

  // rhythm liftering
  int n_c = 3;
  bool lifter_binarized = false;
  bool rhythm_full_resolution = false;  // keep linear-frequency envelope bins

  // vocoder
  int cepstral_order = 60;
  double f0_min = 71.0;
  double f0_max = 800.0;
  double voicing_threshold = 0.45;

  // perturbation
  double vtlp_boundary_freq = 4800.0;
  double fig2_alpha = 0.95;

  // random resampling
  int seg_len_min = 19;
  int seg_len_max = 32;
  double rate_min = 0.5;
  double rate_max = 1.5;

  // pitch representation
  int n_bins = 256;
  double z_min = -4.0;
  double z_max = 4.0;
  double log_f0_std_floor = 1e-3;
  std::string pitch_stats_mode = "per_speaker";  // per_speaker | per_utterance
  std::string pitch_domain = "log";              // log | linear

  // feature emission scale
  std::string feature_scale = "norm_db";  // norm_db | linear
  double feature_ref_db = 16.0;
  double feature_range_db = 100.0;

  FrameConfig frame() const {
    FrameConfig fc;
    fc.sample_rate = sample_rate;
    fc.frame_length = frame_length;
    fc.hop_length = hop_length;
    fc.fft_size = fft_size;
    fc.window = window == "rect" ? WindowKind::kRect : WindowKind::kHann;
    return fc;
  }
  ResampleConfig resample() const {
    ResampleConfig rc;
    rc.seg_len_min = seg_len_min;
    rc.seg_len_max = seg_len_max;
    rc.rate_min = rate_min;
    rc.rate_max = rate_max;
    return rc;
  }
  WarpConfig warp() const {
    WarpConfig wc;
    wc.boundary_freq = vtlp_boundary_freq;
    return wc;
  }
  FeatureScale feature_scale_kind() const {
    if (feature_scale == "norm_db") return FeatureScale::kNormDb;
    if (feature_scale == "linear") return FeatureScale::kLinear;
    throw ConfigError("feature_scale must be norm_db or linear");
  }
  PitchStatsMode pitch_stats_kind() const {
    if (pitch_stats_mode == "per_speaker") return PitchStatsMode::kPerSpeaker;
    if (pitch_stats_mode == "per_utterance") return PitchStatsMode::kPerUtterance;
    throw ConfigError("pitch_stats_mode must be per_speaker or per_utterance");
  }
  PitchDomain pitch_domain_kind() const {
    if (pitch_domain == "log") return PitchDomain::kLog;
    if (pitch_domain == "linear") return PitchDomain::kLinearHz;
    throw ConfigError("pitch_domain must be log or linear");
  }

  void Validate() const {
    frame().Validate();
    if (window != "hann" && window != "rect") throw ConfigError("window must be hann or rect");
    if (n_mels < 1) throw ConfigError("n_mels must be >= 1");
    if (mel_fmax > sample_rate / 2.0) throw ConfigError("mel_fmax exceeds Nyquist");
    if (mel_fmin < 0.0 || mel_fmin >= mel_fmax) throw ConfigError("mel_fmin must lie in [0, mel_fmax)");
    if (n_c < 1 || n_c >= fft_size / 2) throw ConfigError("n_c must satisfy 1 <= n_c < fft_size/2");
    if (cepstral_order < 2 || cepstral_order >= fft_size / 2)
      throw ConfigError("cepstral_order must satisfy 2 <= order < fft_size/2");
    if (!(f0_min > 0.0 && f0_min < f0_max && f0_max < sample_rate / 2.0))
      throw ConfigError("need 0 < f0_min < f0_max < Nyquist");
    if (!(voicing_threshold > 0.0 && voicing_threshold < 1.0))
      throw ConfigError("voicing_threshold must lie in (0, 1)");
    warp().Validate(sample_rate);
    if (fig2_alpha < kAlphaMin || fig2_alpha > kAlphaMax)
      throw ConfigError("fig2_alpha must lie in [0.9, 1.1]");
    resample().Validate();
    if (n_bins < 2) throw ConfigError("n_bins must be >= 2");
    if (!(z_min < z_max)) throw ConfigError("need z_min < z_max");
    if (!(log_f0_std_floor > 0.0)) throw ConfigError("log_f0_std_floor must be positive");
    if (!(feature_range_db > 0.0)) throw ConfigError("feature_range_db must be positive");
    feature_scale_kind();
    pitch_stats_kind();
    pitch_domain_kind();
  }
};

namespace internal {

inline std::string TrimWs(const std::string &s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline int ParseInt(const std::string &key, const std::string &v) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception &) {
    throw ConfigError("config key " + key + ": expected integer, got '" + v + "'");
  }
}

inline double ParseDouble(const std::string &key, const std::string &v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception &) {
    throw ConfigError("config key " + key + ": expected number, got '" + v + "'");
  }
}

inline bool ParseBool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key " + key + ": expected true/false, got '" + v + "'");
}

inline std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace internal

inline void ApplyConfigKey(Config *cfg, const std::string &key, const std::string &value) {
  using internal::ParseBool;
  using internal::ParseDouble;
  using internal::ParseInt;
  if (key == "sample_rate") cfg->sample_rate = ParseInt(key, value);
  else if (key == "frame_length") cfg->frame_length = ParseInt(key, value);
  else if (key == "hop_length") cfg->hop_length = ParseInt(key, value);
  else if (key == "fft_size") cfg->fft_size = ParseInt(key, value);
  else if (key == "window") cfg->window = value;
  else if (key == "n_mels") cfg->n_mels = ParseInt(key, value);
  else if (key == "mel_fmin") cfg->mel_fmin = ParseDouble(key, value);
  else if (key == "mel_fmax") cfg->mel_fmax = ParseDouble(key, value);
  else if (key == "n_c") cfg->n_c = ParseInt(key, value);
  else if (key == "lifter_binarized") cfg->lifter_binarized = ParseBool(key, value);
  else if (key == "rhythm_full_resolution") cfg->rhythm_full_resolution = ParseBool(key, value);
  else if (key == "cepstral_order") cfg->cepstral_order = ParseInt(key, value);
  else if (key == "f0_min") cfg->f0_min = ParseDouble(key, value);
  else if (key == "f0_max") cfg->f0_max = ParseDouble(key, value);
  else if (key == "voicing_threshold") cfg->voicing_threshold = ParseDouble(key, value);
  else if (key == "vtlp_boundary_freq") cfg->vtlp_boundary_freq = ParseDouble(key, value);
  else if (key == "fig2_alpha") cfg->fig2_alpha = ParseDouble(key, value);
  else if (key == "seg_len_min") cfg->seg_len_min = ParseInt(key, value);
  else if (key == "seg_len_max") cfg->seg_len_max = ParseInt(key, value);
  else if (key == "rate_min") cfg->rate_min = ParseDouble(key, value);
  else if (key == "rate_max") cfg->rate_max = ParseDouble(key, value);
  else if (key == "n_bins") cfg->n_bins = ParseInt(key, value);
  else if (key == "z_min") cfg->z_min = ParseDouble(key, value);
  else if (key == "z_max") cfg->z_max = ParseDouble(key, value);
  else if (key == "log_f0_std_floor") cfg->log_f0_std_floor = ParseDouble(key, value);
  else if (key == "pitch_stats_mode") cfg->pitch_stats_mode = value;
  else if (key == "pitch_domain") cfg->pitch_domain = value;
  else if (key == "feature_scale") cfg->feature_scale = value;
  else if (key == "feature_ref_db") cfg->feature_ref_db = ParseDouble(key, value);
  else if (key == "feature_range_db") cfg->feature_range_db = ParseDouble(key, value);
  else throw ConfigError("unknown config key: " + key);
}

inline Config ParseConfigText(const std::string &text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = internal::TrimWs(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = internal::TrimWs(line.substr(0, eq));
    const std::string value = internal::TrimWs(line.substr(eq + 1));
    ApplyConfigKey(&cfg, key, value);
  }
  cfg.Validate();
  return cfg;
}

inline Config LoadConfigFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfigText(ss.str());
}

// Canonical serialization: every key in fixed order with lossless numeric
// formatting, so the hash is stable across runs and platforms.
inline std::string SerializeConfig(const Config &c) {
  using internal::FormatDouble;
  std::ostringstream s;
  s << "sample_rate=" << c.sample_rate << "\n"
    << "frame_length=" << c.frame_length << "\n"
    << "hop_length=" << c.hop_length << "\n"
    << "fft_size=" << c.fft_size << "\n"
    << "window=" << c.window << "\n"
    << "n_mels=" << c.n_mels << "\n"
    << "mel_fmin=" << FormatDouble(c.mel_fmin) << "\n"
    << "mel_fmax=" << FormatDouble(c.mel_fmax) << "\n"
    << "n_c=" << c.n_c << "\n"
    << "lifter_binarized=" << (c.lifter_binarized ? "true" : "false") << "\n"
    << "rhythm_full_resolution=" << (c.rhythm_full_resolution ? "true" : "false") << "\n"
    << "cepstral_order=" << c.cepstral_order << "\n"
    << "f0_min=" << FormatDouble(c.f0_min) << "\n"
    << "f0_max=" << FormatDouble(c.f0_max) << "\n"
    << "voicing_threshold=" << FormatDouble(c.voicing_threshold) << "\n"
    << "vtlp_boundary_freq=" << FormatDouble(c.vtlp_boundary_freq) << "\n"
    << "fig2_alpha=" << FormatDouble(c.fig2_alpha) << "\n"
    << "seg_len_min=" << c.seg_len_min << "\n"
    << "seg_len_max=" << c.seg_len_max << "\n"
    << "rate_min=" << FormatDouble(c.rate_min) << "\n"
    << "rate_max=" << FormatDouble(c.rate_max) << "\n"
    << "n_bins=" << c.n_bins << "\n"
    << "z_min=" << FormatDouble(c.z_min) << "\n"
    << "z_max=" << FormatDouble(c.z_max) << "\n"
    << "log_f0_std_floor=" << FormatDouble(c.log_f0_std_floor) << "\n"
    << "pitch_stats_mode=" << c.pitch_stats_mode << "\n"
    << "pitch_domain=" << c.pitch_domain << "\n"
    << "feature_scale=" << c.feature_scale << "\n"
    << "feature_ref_db=" << FormatDouble(c.feature_ref_db) << "\n"
    << "feature_range_db=" << FormatDouble(c.feature_range_db) << "\n";
  return s.str();
}

inline std::uint64_t ConfigHash(const Config &c) { return Fnv1a64(SerializeConfig(c)); }

inline std::string ConfigHashHex(const Config &c) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(ConfigHash(c)));
  return buf;
}

// Runtime knobs resolved from CLI flags and environment (SPF_SEED,
// SPF_THREADS); explicit flags win over the environment.
struct Runtime {
  std::uint64_t seed = 0;
  int threads = 1;
};

inline Runtime ResolveRuntime(bool seed_given, std::uint64_t seed_flag, bool threads_given,
                              int threads_flag, unsigned hardware_threads) {
  Runtime rt;
  if (seed_given) {
    rt.seed = seed_flag;
  } else if (const char *env = std::getenv("SPF_SEED")) {
    try {
      rt.seed = std::stoull(env);
    } catch (const std::exception &) {
      throw ConfigError("SPF_SEED: expected unsigned integer, got '" + std::string(env) + "'");
    }
  }
  if (threads_given) {
    rt.threads = threads_flag;
  } else if (const char *env = std::getenv("SPF_THREADS")) {
    try {
      rt.threads = std::stoi(env);
    } catch (const std::exception &) {
      throw ConfigError("SPF_THREADS: expected integer, got '" + std::string(env) + "'");
    }
  } else {
    rt.threads = hardware_threads > 0 ? static_cast<int>(hardware_threads) : 1;
  }
  if (rt.threads < 1) throw ConfigError("thread count must be >= 1");
  return rt;
}

}  // namespace spf

#endif  // SPF_CONFIG_HPP_
