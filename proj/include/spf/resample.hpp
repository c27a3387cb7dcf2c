// include/spf/resample.hpp

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

#ifndef SPF_RESAMPLE_HPP_
#define SPF_RESAMPLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "spf/common.hpp"
#include "spf/matrix.hpp"
#include "spf/pitch.hpp"
#include "spf/rng.hpp"

namespace spf {

struct ResampleConfig {
  int seg_len_min = 19;   // frames
  int seg_len_max = 32;
  double rate_min = 0.5;
  double rate_max = 1.5;

  void Validate() const {
    if (seg_len_min < 1 || seg_len_min > seg_len_max)
      throw ConfigError("ResampleConfig: need 1 <= seg_len_min <= seg_len_max");
    if (!(rate_min > 0.0 && rate_min <= rate_max))
      throw ConfigError("ResampleConfig: need 0 < rate_min <= rate_max");
  }
};

enum class FeatureKind { kMel, kEnvelope, kOnehot, kConcat };

struct FeatureSequence {
  Matrix<double> data;  // T x D
  FeatureKind kind = FeatureKind::kMel;
  // For kConcat: the column block holding one-hot rows, re-projected to valid
  // one-hot after interpolation.  kOnehot re-projects all columns.
  std::size_t onehot_begin = 0;
  std::size_t onehot_count = 0;
};

// Per-output-frame provenance: the input frame pair each row was interpolated
// from.  frac = 0 means the row is a pure copy of frame i0.
struct ResampleTrace {
  struct Source {
    std::size_t i0 = 0;
    std::size_t i1 = 0;
    double frac = 0.0;
  };
  std::vector<Source> sources;
  std::vector<std::size_t> segment_starts;  // input-frame index where each segment begins
  std::vector<double> rates;
};

namespace internal {

inline void ProjectOnehotRow(double *row, std::size_t begin, std::size_t count) {
  if (count == 0) return;
  std::size_t best = begin;
  for (std::size_t j = begin; j < begin + count; ++j)
    if (row[j] > row[best]) best = j;
  for (std::size_t j = begin; j < begin + count; ++j) row[j] = 0.0;
  row[best] = 1.0;
}

}  // namespace internal

// Segment-wise random time resampling: contiguous segments with lengths drawn
// uniformly from [seg_len_min, seg_len_max], each stretched or compressed by
// an independent uniform rate via endpoint-preserving linear interpolation.
// Output segment length is ceil(L * rate).
inline FeatureSequence RandomResample(const FeatureSequence &seq, Rng *rng,
                                      const ResampleConfig &cfg = ResampleConfig(),
                                      ResampleTrace *trace = nullptr) {
  cfg.Validate();
  const std::size_t T = seq.data.rows();
  const std::size_t D = seq.data.cols();
  if (T == 0 || D == 0) throw InvalidInput("RandomResample: empty sequence");

  std::vector<ResampleTrace::Source> sources;
  std::vector<std::size_t> seg_starts;
  std::vector<double> rates;
  std::size_t pos = 0;
  while (pos < T) {
    const std::size_t len = std::min(
        static_cast<std::size_t>(rng->UniformInt(cfg.seg_len_min, cfg.seg_len_max)), T - pos);
    const double rate = rng->Uniform(cfg.rate_min, cfg.rate_max);
    seg_starts.push_back(pos);
    rates.push_back(rate);
    const std::size_t out_len =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(static_cast<double>(len) * rate)));
    for (std::size_t j = 0; j < out_len; ++j) {
      double p = 0.0;
      if (out_len > 1 && len > 1)
        p = static_cast<double>(j) * static_cast<double>(len - 1) / static_cast<double>(out_len - 1);
      std::size_t i0 = static_cast<std::size_t>(std::floor(p));
      if (i0 >= len) i0 = len - 1;
      const std::size_t i1 = std::min(i0 + 1, len - 1);
      const double frac = p - static_cast<double>(i0);
      sources.push_back({pos + i0, pos + i1, frac});
    }
    pos += len;
  }

  FeatureSequence out;
  out.kind = seq.kind;
  out.onehot_begin = seq.onehot_begin;
  out.onehot_count = seq.onehot_count;
  out.data = Matrix<double>(sources.size(), D);
  for (std::size_t r = 0; r < sources.size(); ++r) {
    const ResampleTrace::Source &s = sources[r];
    const double *a = seq.data.row(s.i0);
    const double *b = seq.data.row(s.i1);
    double *o = out.data.row(r);
    for (std::size_t d = 0; d < D; ++d) o[d] = (1.0 - s.frac) * a[d] + s.frac * b[d];
    if (seq.kind == FeatureKind::kOnehot)
      internal::ProjectOnehotRow(o, 0, D);
    else if (seq.kind == FeatureKind::kConcat && seq.onehot_count > 0)
      internal::ProjectOnehotRow(o, seq.onehot_begin, seq.onehot_count);
  }
  if (trace != nullptr) {
    trace->sources = std::move(sources);
    trace->segment_starts = std::move(seg_starts);
    trace->rates = std::move(rates);
  }
  return out;
}

struct PitchConverterInput {
  Matrix<double> data;  // T' x (d_spec + n_bins + 1)
  std::size_t d_spec = 0;
  int n_bins = 0;
};

// Framewise concatenation of the perturbed spectrogram features with the
// one-hot pitch rows, followed by one joint resampling pass so the spectral
// and pitch halves of every output frame come from the same source frames.
inline PitchConverterInput BuildPitchConverterInput(const FeatureSequence &spec_perturbed,
                                                    const OneHotPitch &p, Rng *rng,
                                                    const ResampleConfig &cfg = ResampleConfig(),
                                                    ResampleTrace *trace = nullptr) {
  const std::size_t t_spec = spec_perturbed.data.rows();
  const std::size_t t_pitch = p.data.rows();
  if (t_spec == 0 || t_pitch == 0)
    throw InvalidInput("BuildPitchConverterInput: empty input");
  const std::size_t diff = t_spec > t_pitch ? t_spec - t_pitch : t_pitch - t_spec;
  if (diff > 2)
    throw AlignmentError("BuildPitchConverterInput: spectrogram/pitch frame counts differ by more than 2");
  const std::size_t T = std::min(t_spec, t_pitch);
  const std::size_t d_spec = spec_perturbed.data.cols();
  const std::size_t d_pitch = p.data.cols();

  FeatureSequence joint;
  joint.kind = FeatureKind::kConcat;
  joint.onehot_begin = d_spec;
  joint.onehot_count = d_pitch;
  joint.data = Matrix<double>(T, d_spec + d_pitch);
  for (std::size_t t = 0; t < T; ++t) {
    double *o = joint.data.row(t);
    const double *a = spec_perturbed.data.row(t);
    for (std::size_t d = 0; d < d_spec; ++d) o[d] = a[d];
    const double *b = p.data.row(t);
    for (std::size_t d = 0; d < d_pitch; ++d) o[d_spec + d] = b[d];
  }
  FeatureSequence resampled = RandomResample(joint, rng, cfg, trace);
  PitchConverterInput out;
  out.data = std::move(resampled.data);
  out.d_spec = d_spec;
  out.n_bins = p.n_bins;
  return out;
}

}  // namespace spf

#endif  // SPF_RESAMPLE_HPP_
