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

// Command-line front end: generate, measure, scenario, stats, regularities
// and regress.

#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "citeinfl/analytics.hpp"
#include "citeinfl/disruption.hpp"
#include "citeinfl/errors.hpp"
#include "citeinfl/generator.hpp"
#include "citeinfl/io.hpp"
#include "citeinfl/regress.hpp"
#include "citeinfl/scenario.hpp"

namespace fs = std::filesystem;
using namespace citeinfl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct GenerateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out;
};

struct MeasureArgs {
  std::string network;
  Period cw = 5;
  std::optional<Period> first, last;
  bool same_cohort = false;
  unsigned threads = 1;
  std::string out;
};

struct ScenarioArgs {
  int id = 0;
  std::uint64_t seed = kDefaultBaseSeed;
  unsigned threads = 1;
  bool save_networks = false;
  Period interval = 10;
  std::string replay;
  std::string out;
};

struct StatsArgs {
  std::vector<std::string> records;
  Period interval = 10;
  std::optional<Period> first, last;
  std::string out;
};

struct RegularitiesArgs {
  std::string network;
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out;
};

struct RegressArgs {
  std::string table;
  std::optional<std::int64_t> baseline;
  std::string marginal;
  std::vector<double> grid;
  std::string out;
};

void run_generate(const GenerateArgs& a) {
  RunConfig cfg = load_config(a.config);
  if (a.seed) cfg.generator.seed = *a.seed;
  cfg.generator.validate();
  const CitationNetwork net = generate(cfg.generator, {a.threads});
  RunConfig saved = cfg;
  saved.ensemble_size = 1;
  save_network(net, a.out, saved);
  fmt::print("wrote {} nodes, {} edges to {}\n", net.num_nodes(), net.num_edges(), a.out);
}

void run_measure(const MeasureArgs& a) {
  const CitationNetwork net = load_network(a.network);
  const Period last_ok = last_uncensored_cohort(net, a.cw);
  if (last_ok < 1) {
    throw CensoringError(fmt::format("CW={} leaves no uncensored focal cohort (T={})", a.cw,
                                     net.last_period()));
  }
  const Period first = a.first.value_or(1);
  // Focal cohorts within CW of T are dropped.
  const Period last = std::min(a.last.value_or(last_ok), last_ok);
  MeasureOptions opts;
  opts.window.cw = a.cw;
  opts.window.include_same_cohort = a.same_cohort;
  opts.threads = a.threads;
  const auto records = measure_all(net, first, last, opts);
  write_file_atomic(a.out, records_csv(records));
  fmt::print("wrote {} records for cohorts {}..{} (censored {}..{}) to {}\n", records.size(),
             first, last, last_ok + 1, net.last_period(), a.out);
}

void run_scenario_cmd(const ScenarioArgs& a) {
  RunManifest m;
  if (!a.replay.empty()) {
    m = replay_manifest(RunManifest::from_json(read_file(a.replay)), a.out, a.threads);
  } else {
    ScenarioOptions opts;
    opts.threads = a.threads;
    opts.save_networks = a.save_networks;
    opts.interval = a.interval;
    opts.base_seed = a.seed;
    m = run_scenario(a.id, a.out, opts);
  }
  fmt::print("scenario {}: {} members, focal cohorts {}..{}, {} outputs in {}\n", m.scenario,
             m.seeds.size(), m.first_focal, m.last_focal, m.outputs.size(), a.out);
}

void run_stats(const StatsArgs& a) {
  std::vector<DisruptionRecord> pooled;
  for (const auto& path : a.records) {
    auto recs = parse_records_csv(read_file(path));
    pooled.insert(pooled.end(), recs.begin(), recs.end());
  }
  if (pooled.empty()) throw DomainError("no records");
  Period lo = pooled.front().cohort, hi = pooled.front().cohort;
  for (const auto& r : pooled) {
    lo = std::min(lo, r.cohort);
    hi = std::max(hi, r.cohort);
  }
  const auto stats = compute_stats(pooled, a.interval, a.first.value_or(lo), a.last.value_or(hi));
  const auto written = write_stats(stats, a.out);
  fmt::print("wrote {} files to {}\n", written.size(), a.out);
}

void run_regularities(const RegularitiesArgs& a) {
  CitationNetwork net;
  if (!a.network.empty()) {
    net = load_network(a.network);
  } else {
    RunConfig cfg = a.config.empty() ? regularity_config() : load_config(a.config);
    if (a.seed) cfg.generator.seed = *a.seed;
    net = generate(cfg.generator, {a.threads});
  }
  const auto written = write_regularities(net, a.out);
  fmt::print("network: {} nodes, {} edges; wrote {} tables to {}\n", net.num_nodes(),
             net.num_edges(), written.size(), a.out);
}

void run_regress(const RegressArgs& a) {
  const ObservationTable table = parse_table_csv(read_file(a.table));
  FixedEffectsOptions opts;
  opts.baseline = a.baseline;
  const FixedEffectsModel model = ols_fixed_effects(table, opts);
  write_file_atomic(a.out, model_csv(model));
  fmt::print("n={} r2={} dof={}\n", model.n, format_number(model.r2), model.dof);
  for (const auto& name : model.covariate_names) {
    const auto& t = model.term(name);
    fmt::print("  {:<24} {:>14} se={:<14} t={:<12} p={}\n", name, format_number(t.estimate),
               format_number(t.std_error), format_number(t.t_stat), format_number(t.p_value));
  }
  if (!a.marginal.empty()) {
    const auto ys = marginal_effect(model, a.marginal, a.grid);
    for (std::size_t i = 0; i < ys.size(); ++i) {
      fmt::print("  marginal {}={} -> {}\n", a.marginal, format_number(a.grid[i]),
                 format_number(ys[i]));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Citation-network growth simulator and disruption-index toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CITEINFL_VERSION));

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Grow one network from a key=value config");
  gen_cmd->add_option("config", gen.config, "Config file")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--seed", gen.seed, "Override the config seed");
  gen_cmd->add_option("--threads", gen.threads, "Worker threads (0 = all cores)");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  MeasureArgs mea;
  auto* mea_cmd = app.add_subcommand("measure", "Disruption records for a saved network");
  mea_cmd->add_option("network", mea.network, "Network directory")->required();
  mea_cmd->add_option("--cw", mea.cw, "Citation window in periods")->check(CLI::PositiveNumber);
  mea_cmd->add_option("--first", mea.first, "First focal cohort (default 1)");
  mea_cmd->add_option("--last", mea.last, "Last focal cohort (default T - CW)");
  mea_cmd->add_flag("--same-cohort", mea.same_cohort, "Count citers from the focal cohort");
  mea_cmd->add_option("--threads", mea.threads, "Worker threads (0 = all cores)");
  mea_cmd->add_option("--out", mea.out, "Records CSV")->required();

  ScenarioArgs sce;
  auto* sce_cmd = app.add_subcommand("scenario", "Run a full scenario ensemble");
  sce_cmd->add_option("id", sce.id, "Scenario 1-6")->check(CLI::Range(1, 6));
  sce_cmd->add_option("--seed", sce.seed, "Base seed; member k uses seed + k");
  sce_cmd->add_option("--threads", sce.threads, "Worker threads (0 = all cores)");
  sce_cmd->add_option("--interval", sce.interval, "Distribution interval in periods")
      ->check(CLI::PositiveNumber);
  sce_cmd->add_flag("--save-networks", sce.save_networks, "Also write every network");
  sce_cmd->add_option("--replay", sce.replay, "Rerun from a manifest.json")->check(CLI::ExistingFile);
  sce_cmd->add_option("--out", sce.out, "Output directory")->required();

  StatsArgs sta;
  auto* sta_cmd = app.add_subcommand("stats", "Series, distributions and fits from records");
  sta_cmd->add_option("records", sta.records, "Records CSV files (pooled)")->required()->check(CLI::ExistingFile);
  sta_cmd->add_option("--interval", sta.interval, "Distribution interval in periods")
      ->check(CLI::PositiveNumber);
  sta_cmd->add_option("--first", sta.first, "First period of the distribution grid");
  sta_cmd->add_option("--last", sta.last, "Last period of the distribution grid");
  sta_cmd->add_option("--out", sta.out, "Output directory")->required();

  RegularitiesArgs reg;
  auto* reg_cmd = app.add_subcommand("regularities", "Citation regularity tables");
  auto* reg_net = reg_cmd->add_option("--network", reg.network, "Saved network directory");
  reg_cmd->add_option("--config", reg.config, "Generate from this config instead")
      ->excludes(reg_net)->check(CLI::ExistingFile);
  reg_cmd->add_option("--seed", reg.seed, "Override the generator seed");
  reg_cmd->add_option("--threads", reg.threads, "Worker threads (0 = all cores)");
  reg_cmd->add_option("--out", reg.out, "Output directory")->required();

  RegressArgs rgs;
  auto* rgs_cmd = app.add_subcommand("regress", "OLS with period fixed effects");
  rgs_cmd->add_option("table", rgs.table, "CSV with header y,period,<covariates>")
      ->required()->check(CLI::ExistingFile);
  rgs_cmd->add_option("--baseline", rgs.baseline, "Period label used as baseline");
  rgs_cmd->add_option("--marginal", rgs.marginal, "Covariate for marginal effects");
  rgs_cmd->add_option("--grid", rgs.grid, "Grid values for --marginal");
  rgs_cmd->add_option("--out", rgs.out, "Coefficient CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*gen_cmd) run_generate(gen);
    if (*mea_cmd) run_measure(mea);
    if (*sce_cmd) {
      if (sce.replay.empty() && sce.id == 0) throw ConfigError("scenario id or --replay required");
      run_scenario_cmd(sce);
    }
    if (*sta_cmd) run_stats(sta);
    if (*reg_cmd) run_regularities(reg);
    if (*rgs_cmd) run_regress(rgs);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kIo ? kExitIo : kExitValidation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
