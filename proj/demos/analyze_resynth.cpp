// demos/analyze_resynth.cpp

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

// Synthesizes a vowel with vibrato, runs the vocoder analysis, re-synthesizes
// it twice (verbatim and pitch-flattened), and reports the pitch statistics
// of each stage.  Output WAVs land in demo_work/.

#include <cstdio>
#include <filesystem>
#include <vector>

#include "spf/audio_io.hpp"
#include "spf/synth.hpp"
#include "spf/vocoder.hpp"

int main() {
  const spf::FrameConfig cfg;
  std::filesystem::create_directories("demo_work");

  const std::vector<double> H = spf::DefaultFormantEnvelope(cfg);
  const std::vector<double> x = spf::MakeVowel(220.0, 2.0, H, cfg, -30.0, 50.0);
  spf::WriteWav("demo_work/original.wav", x, cfg.sample_rate);

  const spf::AnalysisResult a = spf::Analyze(x, cfg);
  const std::vector<double> resynth =
      spf::Synthesize(a.pitch, a.aperiodicity, a.envelope, x.size(), cfg);
  spf::WriteWav("demo_work/resynth.wav", resynth, cfg.sample_rate);

  const std::vector<double> mono = spf::Monotonize(x, cfg);
  spf::WriteWav("demo_work/monotone.wav", mono, cfg.sample_rate);

  auto report = [&](const char *name, const std::vector<double> &sig) {
    const spf::PitchContour p = spf::EstimateF0(sig, cfg);
    std::printf("%-10s voiced %.0f%%  mean f0 %6.1f Hz  spread %5.1f cents\n", name,
                100.0 * spf::VoicedFraction(p), spf::VoicedMeanF0(p), spf::CentsStd(p));
  };
  report("original", x);
  report("resynth", resynth);
  report("monotone", mono);
  std::printf("wrote demo_work/{original,resynth,monotone}.wav\n");
  return 0;
}
