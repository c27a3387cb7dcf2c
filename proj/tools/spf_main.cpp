// tools/spf_main.cpp

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

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "spf/audio_io.hpp"
#include "spf/config.hpp"
#include "spf/pipeline.hpp"
#include "spf/probes.hpp"
#include "spf/vtlp.hpp"

namespace {

spf::Config LoadConfigOrDefault(const std::string &path) {
  spf::Config cfg;
  if (!path.empty()) cfg = spf::LoadConfigFile(path);
  cfg.Validate();
  return cfg;
}

int CmdIngest(const std::string &root, const std::string &out, const spf::Config &cfg) {
  const spf::CorpusManifest m = spf::Ingest(root, cfg);
  spf::SaveManifest(out, m);
  std::printf("manifest: %zu utterances, %zu skipped -> %s\n", m.entries.size(), m.skipped.size(),
              out.c_str());
  for (const spf::SkippedFile &s : m.skipped)
    std::printf("  skipped %s: %s\n", s.file_path.c_str(), s.reason.c_str());
  return 0;
}

int CmdStats(const std::string &manifest_path, const std::string &out, const spf::Config &cfg,
             int threads) {
  const spf::CorpusManifest m = spf::LoadManifest(manifest_path);
  std::vector<spf::StatsAccumulator> per_utt(m.entries.size());
  std::vector<std::string> errors(m.entries.size());
  spf::internal::ParallelFor(m.entries.size(), threads, [&](std::size_t i) {
    const spf::ManifestEntry &e = m.entries[i];
    try {
      const std::vector<double> x = spf::LoadAudio(e.file_path, cfg);
      const spf::PitchContour p =
          spf::EstimateF0(x, cfg.frame(), cfg.f0_min, cfg.f0_max, cfg.voicing_threshold);
      per_utt[i].AddContour(p, cfg.pitch_domain_kind());
    } catch (const std::exception &ex) {
      errors[i] = ex.what();
    }
  });
  std::map<std::string, spf::StatsAccumulator> by_speaker;
  int failed = 0;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    if (!errors[i].empty()) {
      std::fprintf(stderr, "error: %s: %s\n", m.entries[i].utterance_id.c_str(), errors[i].c_str());
      ++failed;
      continue;
    }
    by_speaker[m.entries[i].speaker_id].Merge(per_utt[i]);
  }
  spf::StatsStore store;
  for (const auto &[speaker, acc] : by_speaker) {
    try {
      store[speaker] = acc.ToStats(speaker, cfg.log_f0_std_floor);
    } catch (const spf::InsufficientData &ex) {
      std::fprintf(stderr, "error: speaker %s: %s\n", speaker.c_str(), ex.what());
      ++failed;
    }
  }
  spf::SaveStatsStore(out, store);
  std::printf("stats: %zu speakers -> %s\n", store.size(), out.c_str());
  return failed ? 1 : 0;
}

int CmdInputs(const std::string &manifest_path, const std::string &out_dir, const spf::Config &cfg,
              const spf::Runtime &rt) {
  const spf::CorpusManifest m = spf::LoadManifest(manifest_path);
  const spf::RunSummary s = spf::RunCorpus(m, cfg, out_dir, rt.seed, rt.threads);
  std::printf("inputs: %zu processed, %zu resumed, %zu failed -> %s\n", s.processed, s.resumed,
              s.failures.size(), out_dir.c_str());
  for (const auto &[id, reason] : s.failures)
    std::fprintf(stderr, "error: %s: %s\n", id.c_str(), reason.c_str());
  return s.failures.empty() ? 0 : 1;
}

int CmdMonotonize(const std::string &in_path, const std::string &out_path, const spf::Config &cfg) {
  const std::vector<double> x = spf::LoadAudio(in_path, cfg);
  const std::vector<double> y = spf::Monotonize(x, cfg.frame());
  spf::WriteWav(out_path, y, cfg.sample_rate);
  std::printf("monotonize: %s -> %s (%zu samples)\n", in_path.c_str(), out_path.c_str(), y.size());
  return 0;
}

int CmdPerturb(const std::string &in_path, double alpha, const std::string &out_path,
               const spf::Config &cfg) {
  const std::vector<double> x = spf::LoadAudio(in_path, cfg);
  spf::WarpFactor w;
  w.alpha = alpha;
  const std::vector<double> y = spf::PerturbWaveform(x, w, cfg.frame(), cfg.warp());
  spf::WriteWav(out_path, y, cfg.sample_rate);
  std::printf("perturb: %s (alpha=%.3f) -> %s\n", in_path.c_str(), alpha, out_path.c_str());
  return 0;
}

int CmdPlotFig2(const std::string &in_path, const std::string &out_dir, const spf::Config &cfg) {
  const std::vector<double> x = spf::LoadAudio(in_path, cfg);
  spf::PlotFigure2(x, cfg, out_dir);
  std::printf("plot-fig2: wrote 4 panels to %s (alpha=%.2f)\n", out_dir.c_str(), cfg.fig2_alpha);
  return 0;
}

int CmdProbes(const std::string &report_path, const std::string &work_dir, const spf::Config &cfg) {
  const spf::ProbeReport report = spf::RunAllProbes(cfg, work_dir);
  for (const spf::ProbeResult &r : report.results) std::printf("%s\n", spf::FormatProbeLine(r).c_str());
  std::printf("probe battery: %s in %.1fs\n", report.all_passed() ? "ALL PASS" : "FAILURES", report.total_seconds);
  if (!report_path.empty()) {
    spf::WriteProbeReport(report, report_path);
    std::printf("report -> %s\n", report_path.c_str());
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"spf: speech disentanglement preprocessing front end"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "plain-text key=value configuration file")->check(CLI::ExistingFile);

  std::uint64_t seed_flag = 0;
  int threads_flag = 0;
  bool seed_given = false, threads_given = false;

  auto *ingest = app.add_subcommand("ingest", "scan a corpus of speaker subdirectories into a manifest");
  std::string ingest_root, ingest_out = "manifest.json";
  ingest->add_option("root", ingest_root, "corpus root directory")->required();
  ingest->add_option("--out", ingest_out, "manifest output path");

  auto *stats = app.add_subcommand("stats", "compute per-speaker pitch statistics from a manifest");
  std::string stats_manifest, stats_out = "speaker_stats.json";
  stats->add_option("manifest", stats_manifest, "manifest path")->required();
  stats->add_option("--out", stats_out, "stats output path");
  stats->add_option("--threads", threads_flag, "worker threads")->each([&](const std::string &) { threads_given = true; });

  auto *inputs = app.add_subcommand("inputs", "emit encoder-input tensors for every utterance");
  std::string inputs_manifest, inputs_out;
  inputs->add_option("manifest", inputs_manifest, "manifest path")->required();
  inputs->add_option("--out", inputs_out, "output directory")->required();
  inputs->add_option("--seed", seed_flag, "master seed")->each([&](const std::string &) { seed_given = true; });
  inputs->add_option("--threads", threads_flag, "worker threads")->each([&](const std::string &) { threads_given = true; });

  auto *mono = app.add_subcommand("monotonize", "re-synthesize a WAV with a flat pitch contour");
  std::string mono_in, mono_out;
  mono->add_option("wav", mono_in, "input WAV")->required()->check(CLI::ExistingFile);
  mono->add_option("--out", mono_out, "output WAV")->required();

  auto *perturb = app.add_subcommand("perturb", "apply vocal tract length perturbation to a WAV");
  std::string pert_in, pert_out;
  double pert_alpha = 1.0;
  perturb->add_option("wav", pert_in, "input WAV")->required()->check(CLI::ExistingFile);
  perturb->add_option("--alpha", pert_alpha, "warp factor in [0.9, 1.1]")->required();
  perturb->add_option("--out", pert_out, "output WAV")->required();

  auto *fig2 = app.add_subcommand("plot-fig2", "write the four-panel spectrogram figure");
  std::string fig2_in, fig2_out;
  fig2->add_option("wav", fig2_in, "input WAV")->required()->check(CLI::ExistingFile);
  fig2->add_option("--out", fig2_out, "output directory")->required();

  auto *probes = app.add_subcommand("probes", "run the synthetic acceptance probe battery");
  std::string probes_report, probes_work = "probe_work";
  bool probes_synth = false;
  probes->add_flag("--synthetic", probes_synth, "use the self-generating synthetic suite (default)");
  probes->add_option("--report", probes_report, "probe report JSON path");
  probes->add_option("--work", probes_work, "scratch directory for probe artifacts");

  CLI11_PARSE(app, argc, argv);

  try {
    const spf::Config cfg = LoadConfigOrDefault(config_path);
    const spf::Runtime rt = spf::ResolveRuntime(seed_given, seed_flag, threads_given, threads_flag,
                                                std::thread::hardware_concurrency());
    if (ingest->parsed()) return CmdIngest(ingest_root, ingest_out, cfg);
    if (stats->parsed()) return CmdStats(stats_manifest, stats_out, cfg, rt.threads);
    if (inputs->parsed()) return CmdInputs(inputs_manifest, inputs_out, cfg, rt);
    if (mono->parsed()) return CmdMonotonize(mono_in, mono_out, cfg);
    if (perturb->parsed()) return CmdPerturb(pert_in, pert_alpha, pert_out, cfg);
    if (fig2->parsed()) return CmdPlotFig2(fig2_in, fig2_out, cfg);
    if (probes->parsed()) return CmdProbes(probes_report, probes_work, cfg);
  } catch (const spf::Error &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
