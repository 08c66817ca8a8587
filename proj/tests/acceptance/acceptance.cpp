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


// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Optional argv[1]: directory for the
// ensemble series tables.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "../unit/support.hpp"
#include "citeinfl/analytics.hpp"
#include "citeinfl/disruption.hpp"
#include "citeinfl/generator.hpp"
#include "citeinfl/io.hpp"
#include "citeinfl/parallel.hpp"
#include "citeinfl/regress.hpp"
#include "citeinfl/scenario.hpp"

using namespace citeinfl;
namespace fs = std::filesystem;

namespace {

// Tolerances and thresholds, fixed here.
constexpr std::size_t kFigNodes = 218698;
constexpr std::size_t kFigEdges = 5025106;
constexpr double kNodeTol = 0.005;
constexpr double kEdgeTol = 0.01;
constexpr Period kTrendFirst = 20, kTrendLast = 145;
constexpr double kDecreasingRho = -0.9;
constexpr double kFinalMeanBound = 0.05;
constexpr double kIncreasingRho = 0.8;
constexpr Period kOrderAfter = 100;
constexpr double kRkPearson = 0.95;
constexpr Period kCapPeriod = 92;
constexpr double kSeMultiple = 2.0;
constexpr Period kPostFirst = 100, kPostLast = 145;
constexpr Period kPreFirst = 60, kPreLast = 90;
constexpr double kRkRelativeDrift = 0.10;
constexpr double kIdentityTol = 1e-12;
constexpr std::size_t kOracleMaxNodes = 50;
constexpr Period kMatureAge = 20;
constexpr double kZKs = 0.05;
constexpr double kLifecycleR2 = 0.9;
constexpr double kShareRho = 0.8;
constexpr Period kShareRankAge = 10;
constexpr std::size_t kShareMinTop = 10;
constexpr Period kAgeTrendAfter = 100;
constexpr double kAgeRho = 0.9;
constexpr double kRegressionP = 0.01;

struct Outcome {
  int id;
  std::string line;
  bool pass;
};
std::vector<Outcome> outcomes;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  outcomes.push_back({id, fmt::format("criterion {:>2} [{}] {}", id, name, detail), pass});
  fmt::print("  evaluated criterion {}\n", id);
  std::fflush(stdout);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

using Rows = std::map<Period, EnsembleRow>;

Rows by_period(const EnsembleResult& r) {
  Rows out;
  for (const auto& row : r.ensemble) out[row.period] = row;
  return out;
}

std::vector<double> column(const Rows& rows, Period first, Period last,
                           double EnsembleRow::*field) {
  std::vector<double> v;
  for (Period t = first; t <= last; ++t) v.push_back(rows.at(t).*field);
  return v;
}

std::vector<double> periods(Period first, Period last) {
  std::vector<double> v;
  for (Period t = first; t <= last; ++t) v.push_back(t);
  return v;
}

double slope(const Rows& rows, Period first, Period last, double EnsembleRow::*field) {
  const auto xs = periods(first, last);
  const auto ys = column(rows, first, last, field);
  return linear_fit(xs, ys).slope;
}

double mean_over(const Rows& rows, Period first, Period last, double EnsembleRow::*field) {
  const auto ys = column(rows, first, last, field);
  double s = 0;
  for (double y : ys) s += y;
  return s / static_cast<double>(ys.size());
}

struct Ensemble {
  RunConfig config;
  std::vector<EnsembleResult> windows;  // parallel to the requested windows
};

Ensemble run(int scenario, const std::vector<Period>& windows, unsigned threads) {
  Timer timer;
  Ensemble e;
  e.config = scenario_spec(scenario).config;
  e.windows = run_ensemble(e.config, windows, threads);
  fmt::print("  ran scenario {} ({} members, windows", scenario, e.config.ensemble_size);
  for (Period w : windows) fmt::print(" {}", w);
  fmt::print(") in {:.1f} s\n", timer.seconds());
  return e;
}

std::vector<DisruptionRecord> pooled(const EnsembleResult& r) {
  std::vector<DisruptionRecord> out;
  for (const auto& m : r.members) out.insert(out.end(), m.records.begin(), m.records.end());
  return out;
}

std::string summary_series(const Rows& rows) {
  std::string s;
  for (Period t : {1, 21, 41, 61, 81, 101, 121, 145}) {
    if (!rows.contains(t)) continue;
    s += fmt::format(" t{}={:.4f}", t, rows.at(t).mean_cd);
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const unsigned threads = resolve_threads(0);
  const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::path();
  Timer total;

  // --- 1 and 7: appendix configuration -------------------------------------
  const RunConfig fig = regularity_config();
  const CitationNetwork fig_net = generate(fig.generator, {.threads = threads});
  {
    const auto& s = fig.generator.schedule;
    const auto nT = schedule_n(s, s.T), rT = schedule_r(s, s.T);
    const double dn = std::abs(static_cast<double>(fig_net.num_nodes()) - kFigNodes) / kFigNodes;
    const double de = std::abs(static_cast<double>(fig_net.num_edges()) - kFigEdges) / kFigEdges;
    report(1, "appendix sizes", nT == 7112 && rT == 35 && dn <= kNodeTol && de <= kEdgeTol,
           fmt::format("n(T)={} r(T)={} nodes={} ({:+.4f}%) edges={} ({:+.4f}%)", nT, rT,
                       fig_net.num_nodes(), 100 * dn, fig_net.num_edges(), 100 * de));
  }
  {
    const Period T = fig_net.last_period();
    // z-scores pooled over cohorts at least kMatureAge periods old at T.
    const ZNormResult zn = znorm_citations(fig_net, T);
    std::vector<double> zs;
    for (Period t = 1; t <= T - kMatureAge; ++t) {
      for (NodeId v = fig_net.cohort_nodes(t).first; v < fig_net.cohort_nodes(t).last; ++v) {
        if (std::isfinite(zn.z[v])) zs.push_back(zn.z[v]);
      }
    }
    const double ks = ks_statistic(zs, [](double x) { return normal_cdf(x, 0, 1); });

    // Exponential tail of the life cycle: ln(new citations) linear in age after the peak.
    double worst_r2 = 1;
    std::string lc_detail;
    for (Period t : {140, 150, 160}) {
      const auto lc = lifecycle(fig_net, t);
      const auto peak = static_cast<std::size_t>(std::max_element(lc.begin(), lc.end()) - lc.begin());
      std::vector<double> ages, logs;
      for (std::size_t a = peak + 1; a < lc.size(); ++a) {
        if (lc[a] <= 0) continue;
        ages.push_back(static_cast<double>(a + 1));
        logs.push_back(std::log(lc[a]));
      }
      const LinearFit f = linear_fit(ages, logs);
      worst_r2 = std::min(worst_r2, f.r2);
      lc_detail += fmt::format(" t{}:R2={:.3f}", t, f.r2);
    }

    // Top-1% share over age, for cohorts whose top group holds >= kShareMinTop nodes.
    double worst_rho = 1;
    bool share_up = true;
    std::string share_detail;
    int share_cohorts = 0;
    for (Period t = 100; t + kShareRankAge + 10 <= T; t += 10) {
      if (fig_net.cohort_size(t) < 100 * kShareMinTop) continue;
      const auto rows = citation_share(fig_net, t, 0.01, kShareRankAge);
      std::vector<double> ages, shares;
      for (const auto& r : rows) {
        if (!std::isfinite(r.top_share)) continue;
        ages.push_back(r.age);
        shares.push_back(r.top_share);
      }
      const double rho = spearman(ages, shares);
      worst_rho = std::min(worst_rho, rho);
      share_up = share_up && shares.back() > shares.front();
      share_detail += fmt::format(" t{}:rho={:.3f}", t, rho);
      ++share_cohorts;
    }

    const auto age_rows = mean_reference_age(fig_net);
    std::vector<double> at, ages;
    for (const auto& r : age_rows) {
      if (r.period <= kAgeTrendAfter) continue;
      at.push_back(r.period);
      ages.push_back(r.mean_age);
    }
    const double age_rho = spearman(at, ages);

    const bool pass = ks < kZKs && worst_r2 > kLifecycleR2 && share_cohorts > 0 &&
                      worst_rho > kShareRho && share_up && age_rho > kAgeRho;
    report(7, "statistical regularities", pass,
           fmt::format("z KS={:.4f} (n={}); lifecycle{}; top-1% share{}; "
                       "ref-age rho(t>{})={:.3f} ({:.2f}->{:.2f})",
                       ks, zs.size(), lc_detail, share_detail, kAgeTrendAfter, age_rho,
                       ages.front(), ages.back()));
  }

  // --- scenario ensembles --------------------------------------------------
  const Ensemble s1 = run(1, {5}, threads);
  const Ensemble s2 = run(2, {5}, threads);
  const Ensemble s34 = run(3, {5, 10}, threads);
  const Ensemble s56 = run(5, {5, 10}, threads);
  const Rows r1 = by_period(s1.windows[0]);
  const Rows r2 = by_period(s2.windows[0]);
  const Rows r3 = by_period(s34.windows[0]);
  const Rows r4 = by_period(s34.windows[1]);
  const Rows r5 = by_period(s56.windows[0]);
  const Rows r6 = by_period(s56.windows[1]);

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::vector<std::pair<std::string, const EnsembleResult*>> tables{
        {"scenario1", &s1.windows[0]}, {"scenario2", &s2.windows[0]},
        {"scenario3", &s34.windows[0]}, {"scenario4", &s34.windows[1]},
        {"scenario5", &s56.windows[0]}, {"scenario6", &s56.windows[1]}};
    for (const auto& [name, res] : tables) {
      write_file_atomic(out_dir / (name + "_series.csv"), ensemble_series_csv(res->ensemble));
    }
  }

  const auto trend_t = periods(kTrendFirst, kTrendLast);

  // --- 2 -------------------------------------------------------------------
  {
    const double rho = spearman(trend_t, column(r3, kTrendFirst, kTrendLast, &EnsembleRow::mean_cd));
    const double last = r3.at(kTrendLast).mean_cd;
    report(2, "scenario 3 decreasing", rho < kDecreasingRho && std::abs(last) < kFinalMeanBound,
           fmt::format("spearman={:.4f} mean_cd({})={:.5f};{}", rho, kTrendLast, last,
                       summary_series(r3)));
  }

  // --- 3 -------------------------------------------------------------------
  {
    const double rho1 = spearman(trend_t, column(r1, kTrendFirst, kTrendLast, &EnsembleRow::mean_cd));
    const double rho2 = spearman(trend_t, column(r2, kTrendFirst, kTrendLast, &EnsembleRow::mean_cd));
    int below = 0;
    for (Period t = kOrderAfter + 1; t <= kTrendLast; ++t) {
      below += r2.at(t).mean_cd < r1.at(t).mean_cd ? 1 : 0;
    }
    report(3, "scenarios 1-2 increasing, 2 >= 1 late",
           rho1 > kIncreasingRho && rho2 > kIncreasingRho && below == 0,
           fmt::format("spearman1={:.4f} spearman2={:.4f} periods t>{} with s2<s1: {}/{}; "
                       "s1:{}; s2:{}",
                       rho1, rho2, kOrderAfter, below, kTrendLast - kOrderAfter,
                       summary_series(r1), summary_series(r2)));
  }

  // --- 4 -------------------------------------------------------------------
  {
    const auto& sched = s34.config.generator.schedule;
    const Period last = s34.windows[0].last_focal;
    std::vector<double> rs, rk;
    for (Period t = 1; t <= last; ++t) {
      rs.push_back(static_cast<double>(schedule_r(sched, t)));
      rk.push_back(r3.at(t).mean_rk);
    }
    const double r = correlate(rs, rk);
    report(4, "R_k tracks r(t)", r > kRkPearson,
           fmt::format("pearson={:.4f} over t=1..{}; R_k(1)={:.2f} R_k({})={:.2f}", r, last,
                       rk.front(), last, rk.back()));
  }

  // --- 5 -------------------------------------------------------------------
  {
    int outside = 0, compared = 0;
    double worst = 0;
    for (const auto& [a, b] : {std::pair{&r3, &r5}, std::pair{&r4, &r6}}) {
      for (Period t = 1; t < kCapPeriod; ++t) {
        const auto& x = a->at(t);
        const auto& y = b->at(t);
        const double se = std::hypot(x.se_cd, y.se_cd);
        const double diff = std::abs(x.mean_cd - y.mean_cd);
        ++compared;
        if (diff > kSeMultiple * se) ++outside;
        if (se > 0) worst = std::max(worst, diff / se);
      }
    }
    // CW=10 censors the window earlier, so the post-cap range ends at its last focal cohort.
    const Period last5 = std::min(kPostLast, s56.windows[0].last_focal);
    const Period last6 = std::min(kPostLast, s56.windows[1].last_focal);
    const double post5 = slope(r5, kPostFirst, last5, &EnsembleRow::mean_cd);
    const double post6 = slope(r6, kPostFirst, last6, &EnsembleRow::mean_cd);
    const double pre5 = slope(r5, kPreFirst, kPreLast, &EnsembleRow::mean_cd);
    const double pre6 = slope(r6, kPreFirst, kPreLast, &EnsembleRow::mean_cd);
    // Fitted change of R_k across the window, relative to its mean level there.
    auto drift = [](const Rows& rows, Period last) {
      return slope(rows, kPostFirst, last, &EnsembleRow::mean_rk) * (last - kPostFirst) /
             mean_over(rows, kPostFirst, last, &EnsembleRow::mean_rk);
    };
    const double drift5 = drift(r5, last5);
    const double drift6 = drift(r6, last6);
    const bool pass = outside == 0 && post5 > 0 && post6 > 0 && pre5 < 0 && pre6 < 0 &&
                      std::abs(drift5) <= kRkRelativeDrift && std::abs(drift6) <= kRkRelativeDrift;
    report(5, "intervention reversal", pass,
           fmt::format("t<{}: {}/{} periods beyond {}SE (max {:.2f}SE); post slope s5={:.3e} "
                       "s6={:.3e}; pre slope s5={:.3e} s6={:.3e}; R_k drift s5={:+.3f} s6={:+.3f}; "
                       "s5:{}",
                       kCapPeriod, outside, compared, kSeMultiple, worst, post5, post6, pre5,
                       pre6, drift5, drift6, summary_series(r5)));
  }

  // --- 6 -------------------------------------------------------------------
  {
    std::size_t checked = 0, violations = 0;
    for (const Ensemble* e : {&s1, &s2, &s34, &s56}) {
      for (const auto& w : e->windows) {
        for (const auto& m : w.members) {
          for (const auto& r : m.records) {
            if (!r.defined()) continue;
            ++checked;
            if (!r.cd_nok) {
              violations += *r.cd != 0.0 ? 1 : 0;
              continue;
            }
            const bool ok = std::abs(*r.cd - *r.cd_nok / (1.0 + *r.r_k)) <= kIdentityTol &&
                            std::abs(*r.cd) <= std::abs(*r.cd_nok);
            violations += ok ? 0 : 1;
          }
        }
      }
    }
    std::size_t graphs = 0, focal = 0, mismatches = 0;
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
      const CitationNetwork net = testing::random_network(seed, 9, 5, 6);
      if (net.num_nodes() > kOracleMaxNodes) continue;
      ++graphs;
      for (Period cw = 1; cw <= 3; ++cw) {
        for (bool same : {false, true}) {
          const WindowOptions w{.cw = cw, .include_same_cohort = same};
          for (const auto& r : measure_all(net, 1, last_uncensored_cohort(net, cw), {.window = w})) {
            const CiterCounts bf = testing::brute_force_counts(net, r.focal, w);
            ++focal;
            mismatches += (bf.n_i != r.n_i || bf.n_j != r.n_j || bf.n_k != r.n_k) ? 1 : 0;
          }
        }
      }
    }
    report(6, "metric identities", violations == 0 && mismatches == 0 && checked > 0,
           fmt::format("{} defined records, {} identity violations; brute force: {} graphs, {} "
                       "focal evaluations, {} mismatches",
                       checked, violations, graphs, focal, mismatches));
  }

  // --- 8 -------------------------------------------------------------------
  {
    const auto& res = s56.windows[0];
    const auto recs = pooled(res);
    const Period interval = 10;
    const Period first = aligned_first(res.first_focal, res.last_focal, interval);
    const Period n_int = (res.last_focal - first + 1) / interval;
    bool pass = n_int >= 3;
    std::string detail;
    for (Period k = n_int - 3; k < n_int; ++k) {
      const Period a = first + k * interval, b = a + interval - 1;
      const auto vals = cd_values(recs, a, b);
      const FitResult ev = fit_extreme_value(vals);
      const FitResult nf = fit_normal(vals);
      pass = pass && ev.ks_stat < nf.ks_stat;
      detail += fmt::format(" [{}-{}] n={} {} KS={:.4f} vs normal KS={:.4f};", a, b, vals.size(),
                            family_name(ev.family), ev.ks_stat, nf.ks_stat);
    }
    report(8, "extreme-value fit beats normal (scenario 5)", pass, detail);
  }

  // --- 9 -------------------------------------------------------------------
  {
    ObservationTable table;
    table.covariate_names = {"ln_r", "ln_nij"};
    table.covariates.resize(2);
    for (const Ensemble* e : {&s2, &s34}) {
      const auto& sched = e->config.generator.schedule;
      for (const auto& m : e->windows[0].members) {
        for (const auto& r : m.records) {
          if (!r.defined()) continue;
          const double xs[2] = {std::log(static_cast<double>(schedule_r(sched, r.cohort))),
                                std::log(static_cast<double>(r.n_ij() + 1))};
          table.add_row(*r.cd, r.cohort, xs);
        }
      }
    }
    const FixedEffectsModel model = ols_fixed_effects(table);
    const Coefficient& b = model.term("ln_r");
    report(9, "regression b_r < 0", b.estimate < 0 && b.p_value < kRegressionP,
           fmt::format("scenarios 2+3 pooled, n={}, period FE; b_r={:.5f} (se {:.5f}, t={:.2f}, "
                       "p={:.3g}); b_nij={:.5f}",
                       model.n, b.estimate, b.std_error, b.t_stat, b.p_value,
                       model.term("ln_nij").estimate));
  }

  // --- 10 ------------------------------------------------------------------
  {
    RunConfig cfg = scenario_spec(3).config;
    cfg.generator.schedule.T = 60;
    cfg.ensemble_size = 2;
    const fs::path root = fs::temp_directory_path() / "citeinfl_acceptance_determinism";
    fs::remove_all(root);
    std::vector<std::string> net_files, table_files;
    bool same = true;
    for (unsigned t : {1u, 2u, 4u}) {
      const CitationNetwork net = generate(cfg.generator, {.threads = t});
      const fs::path dir = root / fmt::format("net_t{}", t);
      save_network(net, dir, cfg);
      const auto recs = measure_all(net, 1, 55, {.window = {.cw = 5}, .threads = t});
      std::string blob;
      for (const char* f : {"nodes.csv", "edges.csv", "network.json"}) blob += read_file(dir / f);
      net_files.push_back(blob);
      table_files.push_back(records_csv(recs));
    }
    RunManifest m;
    m.scenario = 3;
    m.config = cfg;
    m.interval = 5;
    const RunManifest a = replay_manifest(m, root / "run_a", 1);
    const RunManifest b = replay_manifest(m, root / "run_b", 3);
    std::size_t differing = 0;
    for (const auto& f : a.outputs) {
      differing += read_file(root / "run_a" / f) == read_file(root / "run_b" / f) ? 0 : 1;
    }
    for (std::size_t i = 1; i < net_files.size(); ++i) {
      same = same && net_files[i] == net_files[0] && table_files[i] == table_files[0];
    }
    fs::remove_all(root);
    report(10, "determinism", same && differing == 0 && a.outputs == b.outputs,
           fmt::format("network files and records identical across 1/2/4 threads: {}; "
                       "scenario outputs differing between 1 and 3 threads: {}/{}",
                       same ? "yes" : "no", differing, a.outputs.size()));
  }

  std::sort(outcomes.begin(), outcomes.end(),
            [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
  int failures = 0;
  for (const auto& o : outcomes) {
    failures += o.pass ? 0 : 1;
    fmt::print("{} {}\n", o.pass ? "PASS" : "FAIL", o.line);
  }
  fmt::print("{} of {} criteria failed; total {:.1f} s\n", failures, outcomes.size(),
             total.seconds());
  return failures == 0 ? 0 : 1;
}
