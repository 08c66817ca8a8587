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

#include "citeinfl/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "citeinfl/errors.hpp"
#include "citeinfl/generator.hpp"
#include "json.hpp"

#ifndef CITEINFL_VERSION
#define CITEINFL_VERSION "0.0.0"
#endif

namespace citeinfl {
namespace fs = std::filesystem;
using nlohmann::json;

ScenarioSpec scenario_spec(int id, std::uint64_t base_seed) {
  if (id < 1 || id > 6) throw ConfigError("scenario id must be in 1..6, got " + std::to_string(id));
  ScenarioSpec spec;
  spec.id = id;
  auto& g = spec.config.generator;
  spec.config.ensemble_size = 4;
  g.schedule.n0 = 30;
  g.schedule.g_n = 0.033;
  g.schedule.T = 150;
  g.c_cross = 6;
  g.alpha = 5;
  g.seed = base_seed;
  if (id <= 2) {
    g.schedule.r0 = 25;
    g.schedule.g_r = 0;
    g.beta.mode = id == 1 ? BetaSchedule::Mode::kZero : BetaSchedule::Mode::kLinear400;
  } else {
    g.schedule.r0 = 5;
    g.schedule.g_r = 0.018;
    g.beta.mode = BetaSchedule::Mode::kLinear400;
  }
  if (id == 5 || id == 6) {
    g.schedule.cap_period = 92;
    g.schedule.cap_value = 25;
  }
  spec.cw = (id == 4 || id == 6) ? 10 : 5;
  return spec;
}

RunConfig regularity_config(std::uint64_t seed) {
  RunConfig c;
  auto& g = c.generator;
  g.schedule.T = 200;
  g.schedule.n0 = 10;
  g.schedule.r0 = 1;
  g.schedule.g_n = 0.033;
  g.schedule.g_r = 0.018;
  g.beta.mode = BetaSchedule::Mode::kConstant;
  g.beta.value = 0.2;
  g.c_cross = 6;
  g.alpha = 5;
  g.seed = seed;
  c.ensemble_size = 1;
  return c;
}

std::vector<std::uint64_t> ensemble_seeds(const RunConfig& config) {
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < config.ensemble_size; ++k) {
    seeds.push_back(config.generator.seed + static_cast<std::uint64_t>(k));
  }
  return seeds;
}

std::vector<EnsembleResult> run_ensemble(const RunConfig& config,
                                         const std::vector<Period>& windows, unsigned threads,
                                         const NetworkVisitor& visit) {
  std::vector<EnsembleResult> results(windows.size());
  for (std::size_t w = 0; w < windows.size(); ++w) {
    results[w].cw = windows[w];
    results[w].first_focal = 1;
    results[w].last_focal = config.generator.schedule.T - windows[w];
  }
  const auto seeds = ensemble_seeds(config);
  for (std::size_t m = 0; m < seeds.size(); ++m) {
    GeneratorConfig g = config.generator;
    g.seed = seeds[m];
    const CitationNetwork net = generate(g, {threads});
    for (std::size_t w = 0; w < windows.size(); ++w) {
      MeasureOptions opts;
      opts.window.cw = windows[w];
      opts.threads = threads;
      MemberResult member;
      member.seed = seeds[m];
      member.records = measure_all(net, results[w].first_focal, results[w].last_focal, opts);
      member.series = series(member.records);
      results[w].members.push_back(std::move(member));
    }
    if (visit) visit(m, net);
  }
  for (auto& r : results) {
    std::vector<std::vector<SeriesRow>> all;
    for (const auto& m : r.members) all.push_back(m.series);
    r.ensemble = ensemble_series(all);
  }
  return results;
}

Period aligned_first(Period first, Period last, Period interval) {
  const Period span = last - first + 1;
  if (span < interval) return last + 1;
  return last - (span / interval) * interval + 1;
}

StatsOutputs compute_stats(std::span<const DisruptionRecord> pooled, Period interval,
                           Period first, Period last) {
  StatsOutputs out;
  out.series = series(pooled);
  const Period start = aligned_first(first, last, interval);
  if (start > last) return out;
  out.histograms = cd_distribution(pooled, interval, start, last);
  for (const auto& h : out.histograms) {
    const auto values = cd_values(pooled, h.first, h.last);
    if (values.size() < 30) continue;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) continue;
    out.fits.push_back({histogram_label(h), fit_extreme_value(values)});
    out.fits.push_back({histogram_label(h), fit_normal(values)});
  }
  return out;
}

std::vector<std::string> write_stats(const StatsOutputs& stats, const fs::path& dir) {
  std::vector<std::string> written;
  write_file_atomic(dir / "series.csv", series_csv(stats.series));
  written.push_back("series.csv");
  for (const auto& h : stats.histograms) {
    const std::string name = "dist_" + histogram_label(h) + ".csv";
    write_file_atomic(dir / name, histogram_csv(h));
    written.push_back(name);
  }
  write_file_atomic(dir / "fits.csv", fits_csv(stats.fits));
  written.push_back("fits.csv");
  return written;
}

// ---------------------------------------------------------------------------

std::string RunManifest::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["seeds"] = seeds;
  j["config"] = json::parse(config_to_json(config));
  j["cw"] = cw;
  j["interval"] = interval;
  j["save_networks"] = save_networks;
  j["version"] = version;
  j["config_hash"] = fmt::format("{:016x}", config_hash);
  j["focal_range"] = {first_focal, last_focal};
  j["censored_range"] = {censored_first, censored_last};
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    m.scenario = j.at("scenario").get<int>();
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.config = config_from_json(j.at("config").dump());
    m.cw = j.at("cw").get<Period>();
    m.interval = j.value("interval", 10);
    m.save_networks = j.value("save_networks", false);
    m.version = j.value("version", "");
    m.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
    m.first_focal = j.at("focal_range").at(0).get<Period>();
    m.last_focal = j.at("focal_range").at(1).get<Period>();
    m.censored_first = j.at("censored_range").at(0).get<Period>();
    m.censored_last = j.at("censored_range").at(1).get<Period>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  if (m.seeds != ensemble_seeds(m.config)) throw ParseError("manifest: seeds do not match config");
  return m;
}

namespace {

RunManifest run_into(int scenario, const RunConfig& config, Period cw, Period interval,
                     bool save_networks, const fs::path& out_dir, unsigned threads) {
  RunManifest manifest;
  manifest.scenario = scenario;
  manifest.config = config;
  manifest.seeds = ensemble_seeds(config);
  manifest.cw = cw;
  manifest.interval = interval;
  manifest.save_networks = save_networks;
  manifest.version = CITEINFL_VERSION;
  manifest.config_hash = config_hash(config);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  auto visitor = [&](std::size_t member, const CitationNetwork& net) {
    if (!save_networks) return;
    RunConfig member_config = config;
    member_config.generator.seed = manifest.seeds[member];
    member_config.ensemble_size = 1;
    save_network(net, out_dir / fmt::format("member_{}", member) / "network", member_config);
  };
  auto results = run_ensemble(config, {cw}, threads, visitor);
  const EnsembleResult& result = results.front();
  manifest.first_focal = result.first_focal;
  manifest.last_focal = result.last_focal;
  manifest.censored_first = result.last_focal + 1;
  manifest.censored_last = config.generator.schedule.T;

  std::vector<DisruptionRecord> pooled;
  for (std::size_t m = 0; m < result.members.size(); ++m) {
    const auto& member = result.members[m];
    const std::string dir = fmt::format("member_{}", m);
    write_file_atomic(out_dir / dir / "records.csv", records_csv(member.records));
    write_file_atomic(out_dir / dir / "series.csv", series_csv(member.series));
    manifest.outputs.push_back(dir + "/records.csv");
    manifest.outputs.push_back(dir + "/series.csv");
    if (save_networks) {
      for (const char* f : {"nodes.csv", "edges.csv", "network.json"}) {
        manifest.outputs.push_back(dir + "/network/" + f);
      }
    }
    pooled.insert(pooled.end(), member.records.begin(), member.records.end());
  }
  const StatsOutputs stats = compute_stats(pooled, interval, result.first_focal, result.last_focal);
  for (auto& name : write_stats(stats, out_dir)) manifest.outputs.push_back(std::move(name));
  write_file_atomic(out_dir / "series_ensemble.csv", ensemble_series_csv(result.ensemble));
  manifest.outputs.push_back("series_ensemble.csv");
  write_file_atomic(out_dir / "config.txt", config_to_text(config));
  manifest.outputs.push_back("config.txt");
  write_file_atomic(out_dir / "manifest.json", manifest.to_json());
  return manifest;
}

}  // namespace

RunManifest run_scenario(int id, const fs::path& out_dir, const ScenarioOptions& options) {
  const ScenarioSpec spec = scenario_spec(id, options.base_seed);
  return run_into(id, spec.config, spec.cw, options.interval, options.save_networks, out_dir,
                  options.threads);
}

RunManifest replay_manifest(const RunManifest& manifest, const fs::path& out_dir,
                            unsigned threads) {
  return run_into(manifest.scenario, manifest.config, manifest.cw, manifest.interval,
                  manifest.save_networks, out_dir, threads);
}

// ---------------------------------------------------------------------------

std::vector<std::string> write_regularities(const CitationNetwork& net, const fs::path& dir) {
  const Period T = net.last_period();
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file_atomic(dir / name, content);
    written.push_back(name);
  };

  {
    std::string out = "period,n,r,new_edges,total_nodes,total_edges\n";
    std::size_t nodes = 0, edges = 0;
    for (Period t = 0; t <= T; ++t) {
      const NodeRange c = net.cohort_nodes(t);
      std::size_t new_edges = 0;
      for (NodeId v = c.first; v < c.last; ++v) new_edges += net.references(v).size();
      nodes += c.size();
      edges += new_edges;
      const double r = c.empty() ? 0.0 : static_cast<double>(new_edges) / static_cast<double>(c.size());
      out += fmt::format("{},{},{},{},{},{}\n", t, c.size(), format_number(r), new_edges, nodes, edges);
    }
    emit("sizes.csv", out);
  }
  {
    std::string out = "period,mean_age,edges\n";
    for (const auto& row : mean_reference_age(net)) {
      out += fmt::format("{},{},{}\n", row.period, format_number(row.mean_age), row.edges);
    }
    emit("reference_age.csv", out);
  }
  {
    const std::vector<std::int64_t> thresholds{0, 1, 2, 5, 10};
    const Period tau = 5;
    std::vector<std::vector<CohortFraction>> cols;
    for (auto c : thresholds) cols.push_back(fraction_below(net, c, tau));
    std::string out = "cohort";
    for (auto c : thresholds) out += fmt::format(",le_{}", c);
    out += "\n";
    for (std::size_t i = 0; i < (cols.empty() ? 0 : cols.front().size()); ++i) {
      out += std::to_string(cols.front()[i].cohort);
      for (const auto& col : cols) out += "," + format_number(col[i].fraction);
      out += "\n";
    }
    emit("fraction_below.csv", out);
  }
  const Period step = std::max<Period>(1, T / 10);
  {
    std::string out = "cohort,age,mean_new_citations\n";
    for (Period t = step; t <= T; t += step) {
      const auto lc = lifecycle(net, t);
      for (std::size_t a = 0; a < lc.size(); ++a) {
        out += fmt::format("{},{},{}\n", t, a + 1, format_number(lc[a]));
      }
    }
    emit("lifecycle.csv", out);
  }
  const ZNormResult zn = znorm_citations(net, T);
  {
    std::string out = "cohort,n,mu_ln,sigma_ln,degenerate\n";
    for (const auto& c : zn.cohorts) {
      out += fmt::format("{},{},{},{},{}\n", c.cohort, c.n, format_number(c.mu),
                         format_number(c.sigma), c.degenerate ? 1 : 0);
    }
    emit("lognormal.csv", out);
  }
  {
    // Pooled z-score density.
    std::vector<double> zs;
    for (double z : zn.z) {
      if (std::isfinite(z)) zs.push_back(z);
    }
    std::string out = "bin_left,bin_right,density\n";
    const double width = 0.25;
    std::vector<std::size_t> counts(static_cast<std::size_t>(16 / width), 0);
    for (double z : zs) {
      const double pos = (z + 8.0) / width;
      if (pos >= 0 && pos < static_cast<double>(counts.size())) counts[static_cast<std::size_t>(pos)]++;
    }
    for (std::size_t b = 0; b < counts.size(); ++b) {
      const double left = -8.0 + width * static_cast<double>(b);
      const double d = zs.empty() ? 0.0 : static_cast<double>(counts[b]) / (static_cast<double>(zs.size()) * width);
      out += format_number(left) + "," + format_number(left + width) + "," + format_number(d) + "\n";
    }
    emit("zscore_density.csv", out);
  }
  {
    const Period tau_rank = 10;
    std::string top = "cohort,age,top1_share\n";
    std::string bottom = "cohort,age,bottom75_share\n";
    for (Period t = step; t + tau_rank - 1 <= T; t += step) {
      for (const auto& row : citation_share(net, t, 0.01, tau_rank)) {
        top += fmt::format("{},{},{}\n", t, row.age, format_number(row.top_share));
      }
      for (const auto& row : citation_share(net, t, 0.25, tau_rank)) {
        bottom += fmt::format("{},{},{}\n", t, row.age, format_number(row.rest_share));
      }
    }
    emit("citation_share_top.csv", top);
    emit("citation_share_bottom.csv", bottom);
  }
  {
    const Period cohort = T / 2;
    std::string out = "node,period,cumulative_citations\n";
    const NodeRange c = net.cohort_nodes(cohort);
    const NodeId last = std::min<NodeId>(c.last, c.first + 20);
    for (NodeId v = c.first; v < last; ++v) {
      for (Period t = cohort; t <= T; ++t) {
        out += fmt::format("{},{},{}\n", v, t, net.citers_in_cohorts(v, 0, t).size());
      }
    }
    emit("trajectories.csv", out);
  }
  return written;
}

}  // namespace citeinfl
