// tests/acceptance_main.cpp

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

// Acceptance gate: runs every behavioral probe against the default
// configuration and prints one line per criterion.  Exits nonzero if any
// probe fails or the suite exceeds its time budget.

#include <cstdio>

#include "spf/probes.hpp"

int main() {
  const spf::Config cfg;
  spf::ProbeReport report;
  try {
    report = spf::RunAllProbes(cfg, "acceptance_work");
  } catch (const std::exception &e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 2;
  }
  for (const spf::ProbeResult &r : report.results)
    std::printf("%s\n", spf::FormatProbeLine(r).c_str());
  const bool in_budget = report.total_seconds < 60.0;
  std::printf("[%s] total %.1fs (budget 60s), %zu/%zu criteria passed\n",
              report.all_passed() && in_budget ? "PASS" : "FAIL", report.total_seconds,
              static_cast<std::size_t>(
                  std::count_if(report.results.begin(), report.results.end(),
                                [](const spf::ProbeResult &r) { return r.passed; })),
              report.results.size());
  spf::WriteProbeReport(report, "acceptance_work/report.json");
  return report.all_passed() && in_budget ? 0 : 1;
}
