// Copyright 2026 The citeinfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "citeinfl/analytics.hpp"
#include "citeinfl/disruption.hpp"
#include "citeinfl/io.hpp"

namespace citeinfl {

inline constexpr std::uint64_t kDefaultBaseSeed = 20230101;

// The six growth scenarios. All share g_n = 0.033, n(0) = 30, T = 150,
// c_cross = 6, alpha = 5 and four ensemble members:
//   1: r = 25, beta = 0, CW = 5
//   2: r = 25, beta = t/400, CW = 5
//   3: r(0) = 5, g_r = 0.018, beta = t/400, CW = 5
//   4: as 3 with CW = 10
//   5: as 3 with r = 25 from T* = 92 on
//   6: as 5 with CW = 10
struct ScenarioSpec {
  int id = 1;
  RunConfig config;
  Period cw = 5;
};

ScenarioSpec scenario_spec(int id, std::uint64_t base_seed = kDefaultBaseSeed);

// Growth parameters of the appendix validation network (T = 200, n0 = 10,
// r0 = 1, g_n = 0.033, g_r = 0.018, beta = 1/5, c_cross = 6, alpha = 5).
RunConfig regularity_config(std::uint64_t seed = kDefaultBaseSeed);

// Ensemble member k uses seed base + k.
std::vector<std::uint64_t> ensemble_seeds(const RunConfig& config);

struct MemberResult {
  std::uint64_t seed = 0;
  std::vector<DisruptionRecord> records;
  std::vector<SeriesRow> series;
};

struct EnsembleResult {
  Period cw = 5;
  Period first_focal = 1;
  Period last_focal = 0;
  std::vector<MemberResult> members;
  std::vector<EnsembleRow> ensemble;
};

// Optional hook that sees every generated network before it is dropped.
using NetworkVisitor = std::function<void(std::size_t member, const CitationNetwork&)>;

// Generates every member and measures it with each window in `windows`.
// Returns one EnsembleResult per window, in the same order.
std::vector<EnsembleResult> run_ensemble(const RunConfig& config,
                                         const std::vector<Period>& windows,
                                         unsigned threads,
                                         const NetworkVisitor& visit = {});

// Per-interval distributions and fits of pooled records over [first, last].
struct StatsOutputs {
  std::vector<SeriesRow> series;
  std::vector<IntervalHistogram> histograms;
  std::vector<IntervalFit> fits;
};

StatsOutputs compute_stats(std::span<const DisruptionRecord> pooled, Period interval,
                           Period first, Period last);
// The interval grid aligned to end at `last`.
Period aligned_first(Period first, Period last, Period interval);

// Writes series.csv, dist_<a>-<b>.csv and fits.csv; returns written names.
std::vector<std::string> write_stats(const StatsOutputs& stats, const std::filesystem::path& dir);

struct RunManifest {
  int scenario = 0;
  std::vector<std::uint64_t> seeds;
  RunConfig config;
  Period cw = 5;
  Period interval = 10;
  bool save_networks = false;
  std::string version;
  std::uint64_t config_hash = 0;
  Period first_focal = 1;
  Period last_focal = 0;
  Period censored_first = 0;  // focal cohorts dropped by the window guard
  Period censored_last = 0;
  std::vector<std::string> outputs;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

struct ScenarioOptions {
  unsigned threads = 1;
  bool save_networks = false;
  Period interval = 10;
  std::uint64_t base_seed = kDefaultBaseSeed;
};

RunManifest run_scenario(int id, const std::filesystem::path& out_dir,
                         const ScenarioOptions& options = {});
// Reruns a manifest into out_dir.
RunManifest replay_manifest(const RunManifest& manifest, const std::filesystem::path& out_dir,
                            unsigned threads = 1);

// Writes the appendix regularity tables under dir; returns written names.
std::vector<std::string> write_regularities(const CitationNetwork& net,
                                            const std::filesystem::path& dir);

}  // namespace citeinfl
