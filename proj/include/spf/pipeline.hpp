// include/spf/pipeline.hpp

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

#ifndef SPF_PIPELINE_HPP_
#define SPF_PIPELINE_HPP_

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "spf/audio_io.hpp"
#include "spf/cepstrum.hpp"
#include "spf/config.hpp"
#include "spf/mel.hpp"
#include "spf/pitch.hpp"
#include "spf/png.hpp"
#include "spf/resample.hpp"
#include "spf/rng.hpp"
#include "spf/stft.hpp"
#include "spf/tensor_io.hpp"
#include "spf/vocoder.hpp"
#include "spf/vtlp.hpp"

namespace spf {

// ---------------------------------------------------------------------------
// Speaker statistics persistence
// ---------------------------------------------------------------------------

using StatsStore = std::map<std::string, SpeakerStats>;

inline void SaveStatsStore(const std::string &path, const StatsStore &store) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &[id, s] : store) {
    arr.push_back({{"speaker_id", s.speaker_id},
                   {"log_f0_mean", s.log_f0_mean},
                   {"log_f0_std", s.log_f0_std},
                   {"frame_count", s.frame_count}});
  }
  AtomicWriteFile(path, arr.dump(2) + "\n");
}

inline StatsStore LoadStatsStore(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open stats file " + path);
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const std::exception &e) {
    throw IOError("malformed stats file " + path + ": " + e.what());
  }
  StatsStore store;
  for (const auto &j : arr) {
    SpeakerStats s;
    s.speaker_id = j.at("speaker_id").get<std::string>();
    s.log_f0_mean = j.at("log_f0_mean").get<double>();
    s.log_f0_std = j.at("log_f0_std").get<double>();
    s.frame_count = j.at("frame_count").get<std::uint64_t>();
    store[s.speaker_id] = s;
  }
  return store;
}

// ---------------------------------------------------------------------------
// Corpus manifest
// ---------------------------------------------------------------------------

struct ManifestEntry {
  std::string utterance_id;
  std::string speaker_id;
  std::string file_path;
  double duration_s = 0.0;
  int sample_rate = 0;
};

struct SkippedFile {
  std::string file_path;
  std::string reason;
};

struct CorpusManifest {
  std::string corpus_root;
  std::string config_hash;
  std::vector<ManifestEntry> entries;
  std::vector<SkippedFile> skipped;
};

namespace internal {

inline bool HasWavExtension(const std::filesystem::path &p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".wav";
}

}  // namespace internal

// Scans a directory of speaker subdirectories for mono PCM16 WAV files.
// Non-conforming files are listed with the reason and skipped.
inline CorpusManifest Ingest(const std::string &corpus_root, const Config &cfg) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(corpus_root)) throw IOError("corpus root is not a readable directory: " + corpus_root);
  CorpusManifest m;
  m.corpus_root = fs::absolute(corpus_root).generic_string();
  m.config_hash = ConfigHashHex(cfg);

  std::vector<fs::path> speakers;
  for (const auto &entry : fs::directory_iterator(corpus_root))
    if (entry.is_directory()) speakers.push_back(entry.path());
  std::sort(speakers.begin(), speakers.end());

  std::set<std::string> seen_ids;
  for (const fs::path &spk : speakers) {
    std::vector<fs::path> files;
    for (const auto &entry : fs::recursive_directory_iterator(spk))
      if (entry.is_regular_file() && internal::HasWavExtension(entry.path())) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path &f : files) {
      const std::string rel = fs::relative(f, corpus_root).generic_string();
      const std::string id = rel.substr(0, rel.size() - f.extension().string().size());
      if (!seen_ids.insert(id).second) {
        m.skipped.push_back({f.generic_string(), "duplicate utterance id " + id});
        continue;
      }
      try {
        const WavData wav = ReadWav(f.string());
        ManifestEntry e;
        e.utterance_id = id;
        e.speaker_id = spk.filename().generic_string();
        e.file_path = fs::absolute(f).generic_string();
        e.sample_rate = wav.sample_rate;
        e.duration_s = wav.sample_rate > 0
                           ? static_cast<double>(wav.samples.size()) / wav.sample_rate
                           : 0.0;
        m.entries.push_back(std::move(e));
      } catch (const IOError &e) {
        m.skipped.push_back({f.generic_string(), e.what()});
      }
    }
  }
  return m;
}

inline void SaveManifest(const std::string &path, const CorpusManifest &m) {
  nlohmann::json j;
  j["corpus_root"] = m.corpus_root;
  j["config_hash"] = m.config_hash;
  j["entries"] = nlohmann::json::array();
  for (const ManifestEntry &e : m.entries) {
    j["entries"].push_back({{"utterance_id", e.utterance_id},
                            {"speaker_id", e.speaker_id},
                            {"file_path", e.file_path},
                            {"duration_s", e.duration_s},
                            {"sample_rate", e.sample_rate}});
  }
  j["skipped"] = nlohmann::json::array();
  for (const SkippedFile &s : m.skipped)
    j["skipped"].push_back({{"file_path", s.file_path}, {"reason", s.reason}});
  AtomicWriteFile(path, j.dump(2) + "\n");
}

inline CorpusManifest LoadManifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open manifest " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception &e) {
    throw IOError("malformed manifest " + path + ": " + e.what());
  }
  CorpusManifest m;
  m.corpus_root = j.value("corpus_root", "");
  m.config_hash = j.value("config_hash", "");
  for (const auto &e : j.at("entries")) {
    ManifestEntry entry;
    entry.utterance_id = e.at("utterance_id").get<std::string>();
    entry.speaker_id = e.at("speaker_id").get<std::string>();
    entry.file_path = e.at("file_path").get<std::string>();
    entry.duration_s = e.at("duration_s").get<double>();
    entry.sample_rate = e.at("sample_rate").get<int>();
    m.entries.push_back(std::move(entry));
  }
  if (j.contains("skipped"))
    for (const auto &s : j.at("skipped"))
      m.skipped.push_back({s.at("file_path").get<std::string>(), s.at("reason").get<std::string>()});
  return m;
}

// Reads audio and converts it to the configured sample rate.
inline std::vector<double> LoadAudio(const std::string &path, const Config &cfg) {
  const WavData wav = ReadWav(path);
  if (wav.sample_rate == cfg.sample_rate) return wav.samples;
  return ResampleRate(wav.samples, wav.sample_rate, cfg.sample_rate);
}

// ---------------------------------------------------------------------------
// Encoder-input builders
// ---------------------------------------------------------------------------

struct Provenance {
  std::uint64_t seed = 0;
  double alpha = 1.0;
  int n_c = 0;
  std::string config_hash;
};

struct EncoderInputs {
  FeatureSequence S;    // mel-spectrogram features of the original utterance
  FeatureSequence S_c;  // content input
  FeatureSequence S_r;  // rhythm input
  FeatureSequence P_r;  // resampled one-hot pitch input
  PitchConverterInput S_p;
  Provenance provenance;
};

namespace internal {

// Mel features in the configured emission scale.
inline FeatureSequence ScaledMelFeature(const MagnitudeSpectrogram &mag, const Config &cfg,
                                        FeatureKind kind = FeatureKind::kMel) {
  const MelSpectrogram mel = MelProject(mag, cfg.n_mels, cfg.mel_fmin, cfg.mel_fmax);
  FeatureSequence out;
  out.kind = kind;
  out.data = Matrix<double>(mel.data.rows(), mel.data.cols());
  const bool norm = cfg.feature_scale_kind() == FeatureScale::kNormDb;
  for (std::size_t t = 0; t < mel.data.rows(); ++t)
    for (std::size_t k = 0; k < mel.data.cols(); ++k)
      out.data(t, k) = norm ? LogToNormDb(mel.data(t, k), cfg.feature_ref_db, cfg.feature_range_db)
                            : std::exp(mel.data(t, k));
  return out;
}

// Rhythm envelope features: mel-projected by default so all encoder inputs
// share a width; optionally kept at full linear-frequency resolution.
inline FeatureSequence ScaledEnvelopeFeature(const MagnitudeSpectrogram &env, const Config &cfg) {
  if (!cfg.rhythm_full_resolution) return ScaledMelFeature(env, cfg, FeatureKind::kEnvelope);
  FeatureSequence out;
  out.kind = FeatureKind::kEnvelope;
  out.data = Matrix<double>(env.data.rows(), env.data.cols());
  const bool norm = cfg.feature_scale_kind() == FeatureScale::kNormDb;
  for (std::size_t t = 0; t < env.data.rows(); ++t)
    for (std::size_t k = 0; k < env.data.cols(); ++k)
      out.data(t, k) = norm ? LinearToNormDb(env.data(t, k), cfg.feature_ref_db, cfg.feature_range_db)
                            : env.data(t, k);
  return out;
}

// Low-quefrency liftered spectral envelope of a (possibly warped) magnitude
// spectrogram; linear scale.
inline MagnitudeSpectrogram RhythmEnvelope(const MagnitudeSpectrogram &mag, const Config &cfg) {
  const Lifter lifter = MakeLifter(cfg.n_c, cfg.fft_size, cfg.lifter_binarized);
  return EnvelopeFromCepstrum(LifterCepstrum(RealCepstrumOfMagnitude(mag), lifter));
}

}  // namespace internal

// S_c = R(mel(VTLP(spectrogram(monotonize(x)))))
inline FeatureSequence BuildContentInput(const std::vector<double> &x, Rng *rng, const Config &cfg,
                                         ResampleTrace *trace = nullptr) {
  const WarpFactor w = SampleAlpha(rng);
  const FrameConfig fc = cfg.frame();
  const MagnitudeSpectrogram warped = VtlpWarp(Spectrogram(Monotonize(x, fc), fc), w, cfg.warp());
  return RandomResample(internal::ScaledMelFeature(warped, cfg), rng, cfg.resample(), trace);
}

// S_r = R(envelope(lifter(cepstrum(VTLP(spectrogram(monotonize(x)))))))
inline FeatureSequence BuildRhythmInput(const std::vector<double> &x, Rng *rng, const Config &cfg,
                                        ResampleTrace *trace = nullptr) {
  const WarpFactor w = SampleAlpha(rng);
  const FrameConfig fc = cfg.frame();
  const MagnitudeSpectrogram warped = VtlpWarp(Spectrogram(Monotonize(x, fc), fc), w, cfg.warp());
  const MagnitudeSpectrogram env = internal::RhythmEnvelope(warped, cfg);
  return RandomResample(internal::ScaledEnvelopeFeature(env, cfg), rng, cfg.resample(), trace);
}

// R(P): quantized one-hot pitch contour, randomly resampled.
inline FeatureSequence BuildPitchInput(const std::vector<double> &x, const SpeakerStats &stats,
                                       Rng *rng, const Config &cfg, ResampleTrace *trace = nullptr) {
  const PitchContour p = EstimateF0(x, cfg.frame(), cfg.f0_min, cfg.f0_max, cfg.voicing_threshold);
  const NormalizedContour z =
      NormalizeContour(p, stats, cfg.pitch_domain_kind(), cfg.log_f0_std_floor);
  const OneHotPitch onehot = QuantizeOneHot(z, cfg.n_bins, cfg.z_min, cfg.z_max);
  FeatureSequence seq;
  seq.kind = FeatureKind::kOnehot;
  seq.data = onehot.data;
  return RandomResample(seq, rng, cfg.resample(), trace);
}

// Assembles all four encoder inputs for one utterance.  One alpha is drawn
// per utterance and shared by every branch; each randomized stage consumes
// its own sub-stream derived from the utterance seed, so no stage's draws
// can shift another's.
inline EncoderInputs BuildAll(const std::vector<double> &x, const std::string &speaker_id,
                              const StatsStore &stats_store, std::uint64_t seed, const Config &cfg) {
  const FrameConfig fc = cfg.frame();
  Rng alpha_rng(DeriveSeed(seed, "alpha"));
  Rng content_rng(DeriveSeed(seed, "content"));
  Rng rhythm_rng(DeriveSeed(seed, "rhythm"));
  Rng pitch_rng(DeriveSeed(seed, "pitch"));
  Rng joint_rng(DeriveSeed(seed, "joint"));

  WarpFactor w = SampleAlpha(&alpha_rng);
  w.seed = seed;

  EncoderInputs out;
  out.S = internal::ScaledMelFeature(Spectrogram(x, fc), cfg);

  const std::vector<double> mono = Monotonize(x, fc);
  const MagnitudeSpectrogram warped = VtlpWarp(Spectrogram(mono, fc), w, cfg.warp());
  const FeatureSequence s_tilde = internal::ScaledMelFeature(warped, cfg);
  out.S_c = RandomResample(s_tilde, &content_rng, cfg.resample());

  const MagnitudeSpectrogram env = internal::RhythmEnvelope(warped, cfg);
  out.S_r = RandomResample(internal::ScaledEnvelopeFeature(env, cfg), &rhythm_rng, cfg.resample());

  const PitchContour p = EstimateF0(x, fc, cfg.f0_min, cfg.f0_max, cfg.voicing_threshold);
  SpeakerStats stats;
  if (cfg.pitch_stats_kind() == PitchStatsMode::kPerSpeaker) {
    const auto it = stats_store.find(speaker_id);
    if (it == stats_store.end())
      throw StatsNotFound("no speaker stats for '" + speaker_id + "'");
    stats = it->second;
  } else {
    stats = ComputeSpeakerStats({p}, speaker_id, cfg.pitch_domain_kind(), cfg.log_f0_std_floor);
  }
  const NormalizedContour z =
      NormalizeContour(p, stats, cfg.pitch_domain_kind(), cfg.log_f0_std_floor);
  const OneHotPitch onehot = QuantizeOneHot(z, cfg.n_bins, cfg.z_min, cfg.z_max);
  FeatureSequence pitch_seq;
  pitch_seq.kind = FeatureKind::kOnehot;
  pitch_seq.data = onehot.data;
  out.P_r = RandomResample(pitch_seq, &pitch_rng, cfg.resample());

  out.S_p = BuildPitchConverterInput(s_tilde, onehot, &joint_rng, cfg.resample());

  out.provenance.seed = seed;
  out.provenance.alpha = w.alpha;
  out.provenance.n_c = cfg.n_c;
  out.provenance.config_hash = ConfigHashHex(cfg);
  return out;
}

// ---------------------------------------------------------------------------
// Corpus run
// ---------------------------------------------------------------------------

struct RunSummary {
  std::size_t processed = 0;
  std::size_t resumed = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // utterance id, reason
  std::string stats_path;
  std::string index_path;
};

namespace internal {

template <typename Fn>
inline void ParallelFor(std::size_t count, int threads, Fn fn) {
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (std::thread &t : pool) t.join();
}

inline const std::vector<std::string> &TensorFileNames() {
  static const std::vector<std::string> names = {"S.spf", "S_c.spf", "S_r.spf", "P_r.spf", "S_p.spf"};
  return names;
}

}  // namespace internal

// Two passes over the manifest: (1) per-speaker pitch statistics, persisted
// as JSON; (2) per-utterance encoder inputs as tensor files plus provenance.
// Utterances already completed under the same config hash are skipped;
// outputs under a different config hash are refused, never overwritten.
inline RunSummary RunCorpus(const CorpusManifest &manifest, const Config &cfg,
                            const std::string &out_dir, std::uint64_t master_seed, int threads = 1) {
  namespace fs = std::filesystem;
  cfg.Validate();
  fs::create_directories(out_dir);
  fs::create_directories(fs::path(out_dir) / "inputs");
  const std::string config_hash = ConfigHashHex(cfg);

  RunSummary summary;
  summary.stats_path = (fs::path(out_dir) / "speaker_stats.json").generic_string();
  summary.index_path = (fs::path(out_dir) / "index.json").generic_string();

  std::mutex mu;
  std::map<std::string, std::string> pass1_failures;

  // Per-utterance accumulators are kept in manifest order and merged
  // sequentially afterwards, so the statistics are identical for any
  // thread count.
  std::vector<StatsAccumulator> per_utt(manifest.entries.size());
  internal::ParallelFor(manifest.entries.size(), threads, [&](std::size_t i) {
    const ManifestEntry &e = manifest.entries[i];
    try {
      const std::vector<double> x = LoadAudio(e.file_path, cfg);
      const PitchContour p = EstimateF0(x, cfg.frame(), cfg.f0_min, cfg.f0_max, cfg.voicing_threshold);
      per_utt[i].AddContour(p, cfg.pitch_domain_kind());
    } catch (const std::exception &ex) {
      std::lock_guard<std::mutex> lock(mu);
      pass1_failures[e.utterance_id] = ex.what();
    }
  });

  std::map<std::string, StatsAccumulator> accumulators;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i)
    accumulators[manifest.entries[i].speaker_id].Merge(per_utt[i]);

  StatsStore store;
  for (const auto &[speaker, acc] : accumulators) {
    try {
      store[speaker] = acc.ToStats(speaker, cfg.log_f0_std_floor);
    } catch (const InsufficientData &) {
      // Speaker with zero voiced frames: utterances fail individually below.
    }
  }
  SaveStatsStore(summary.stats_path, store);

  std::vector<std::string> completed, resumed_ids;
  internal::ParallelFor(manifest.entries.size(), threads, [&](std::size_t i) {
    const ManifestEntry &e = manifest.entries[i];
    {
      std::lock_guard<std::mutex> lock(mu);
      const auto it = pass1_failures.find(e.utterance_id);
      if (it != pass1_failures.end()) {
        summary.failures.emplace_back(e.utterance_id, it->second);
        return;
      }
    }
    try {
      const fs::path utt_dir = fs::path(out_dir) / "inputs" / e.utterance_id;
      const fs::path prov_path = utt_dir / "provenance.json";
      if (fs::exists(prov_path)) {
        std::ifstream in(prov_path);
        nlohmann::json j;
        in >> j;
        const std::string existing_hash = j.value("config_hash", "");
        bool complete = true;
        for (const std::string &name : internal::TensorFileNames())
          complete = complete && fs::exists(utt_dir / name);
        if (existing_hash == config_hash && complete) {
          std::lock_guard<std::mutex> lock(mu);
          ++summary.resumed;
          resumed_ids.push_back(e.utterance_id);
          return;
        }
        if (existing_hash != config_hash)
          throw ConfigError("existing outputs for " + e.utterance_id + " were written under config hash " +
                            existing_hash + "; refusing to overwrite (current " + config_hash + ")");
      }
      fs::create_directories(utt_dir);
      const std::vector<double> x = LoadAudio(e.file_path, cfg);
      const std::uint64_t seed = DeriveSeed(master_seed, e.utterance_id);
      const EncoderInputs inputs = BuildAll(x, e.speaker_id, store, seed, cfg);
      WriteTensor((utt_dir / "S.spf").string(), MatrixToTensor(inputs.S.data));
      WriteTensor((utt_dir / "S_c.spf").string(), MatrixToTensor(inputs.S_c.data));
      WriteTensor((utt_dir / "S_r.spf").string(), MatrixToTensor(inputs.S_r.data));
      WriteTensor((utt_dir / "P_r.spf").string(), MatrixToTensor(inputs.P_r.data));
      WriteTensor((utt_dir / "S_p.spf").string(), MatrixToTensor(inputs.S_p.data));
      nlohmann::json prov = {{"utterance_id", e.utterance_id},
                             {"speaker_id", e.speaker_id},
                             {"seed", inputs.provenance.seed},
                             {"alpha", inputs.provenance.alpha},
                             {"n_c", inputs.provenance.n_c},
                             {"config_hash", inputs.provenance.config_hash}};
      AtomicWriteFile(prov_path.string(), prov.dump(2) + "\n");
      std::lock_guard<std::mutex> lock(mu);
      ++summary.processed;
      completed.push_back(e.utterance_id);
    } catch (const std::exception &ex) {
      std::lock_guard<std::mutex> lock(mu);
      summary.failures.emplace_back(e.utterance_id, ex.what());
    }
  });

  std::sort(completed.begin(), completed.end());
  std::sort(resumed_ids.begin(), resumed_ids.end());
  std::sort(summary.failures.begin(), summary.failures.end());
  nlohmann::json index;
  index["config_hash"] = config_hash;
  index["master_seed"] = master_seed;
  index["completed"] = completed;
  index["resumed"] = resumed_ids;
  index["failed"] = nlohmann::json::array();
  for (const auto &[id, reason] : summary.failures)
    index["failed"].push_back({{"utterance_id", id}, {"reason", reason}});
  AtomicWriteFile(summary.index_path, index.dump(2) + "\n");
  return summary;
}

// ---------------------------------------------------------------------------
// Figure 2 reproduction
// ---------------------------------------------------------------------------

struct Figure2Data {
  MagnitudeSpectrogram original;    // (a)
  MagnitudeSpectrogram monotonic;   // (b)
  MagnitudeSpectrogram perturbed;   // (c), fixed alpha
  MagnitudeSpectrogram envelope;    // (d), liftered envelope of (c)
};

inline Figure2Data ComputeFigure2(const std::vector<double> &x, const Config &cfg) {
  const FrameConfig fc = cfg.frame();
  Figure2Data fig;
  fig.original = Spectrogram(x, fc);
  fig.monotonic = Spectrogram(Monotonize(x, fc), fc);
  WarpFactor w;
  w.alpha = cfg.fig2_alpha;
  fig.perturbed = VtlpWarp(fig.monotonic, w, cfg.warp());
  fig.envelope = internal::RhythmEnvelope(fig.perturbed, cfg);
  return fig;
}

inline Figure2Data PlotFigure2(const std::vector<double> &x, const Config &cfg,
                               const std::string &out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const Figure2Data fig = ComputeFigure2(x, cfg);
  WriteSpectrogramPng((fs::path(out_dir) / "fig2a_original.png").string(), fig.original.data);
  WriteSpectrogramPng((fs::path(out_dir) / "fig2b_monotonic.png").string(), fig.monotonic.data);
  WriteSpectrogramPng((fs::path(out_dir) / "fig2c_perturbed.png").string(), fig.perturbed.data);
  WriteSpectrogramPng((fs::path(out_dir) / "fig2d_envelope.png").string(), fig.envelope.data);
  return fig;
}

}  // namespace spf

#endif  // SPF_PIPELINE_HPP_
