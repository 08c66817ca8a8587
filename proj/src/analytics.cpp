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

#include "citeinfl/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "citeinfl/errors.hpp"

namespace citeinfl {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = 3.14159265358979323846;

struct Accumulator {
  double sum = 0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    ++n;
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

void mean_se(const std::vector<double>& v, double& mean, double& se) {
  if (v.empty()) {
    mean = kNaN;
    se = kNaN;
    return;
  }
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) {
    se = 0;
    return;
  }
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

void check_fit_input(std::span<const double> samples) {
  if (samples.size() < 30) {
    throw FitError("at least 30 samples required, got " + std::to_string(samples.size()));
  }
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  if (*lo == *hi) throw FitError("sample has zero variance");
}

double gumbel_log_likelihood(std::span<const double> xs, double loc, double scale) {
  double ll = 0;
  for (double x : xs) {
    const double z = (x - loc) / scale;
    ll += -std::log(scale) - z - std::exp(-z);
  }
  return ll;
}

// Maximum-likelihood Gumbel (max) fit. The scale solves
//   s = mean(x) - sum x e^{-x/s} / sum e^{-x/s},
// which is monotone in s; Newton steps are safeguarded by a bracket.
std::pair<double, double> gumbel_max_mle(std::span<const double> xs) {
  const auto n = static_cast<double>(xs.size());
  const double xmin = *std::min_element(xs.begin(), xs.end());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= (n - 1);

  // score(s) and its derivative, with x shifted by xmin for stability.
  auto score = [&](double s, double* deriv) {
    double s0 = 0, s1 = 0, s2 = 0;
    for (double x : xs) {
      const double d = x - xmin;
      const double e = std::exp(-d / s);
      s0 += e;
      s1 += d * e;
      s2 += d * d * e;
    }
    const double m1 = s1 / s0;
    if (deriv) *deriv = -1.0 - (s2 / s0 - m1 * m1) / (s * s);
    return (mean - xmin) - s - m1;
  };

  double s = std::sqrt(var) * std::sqrt(6.0) / kPi;  // method of moments
  double lo = s * 1e-6, hi = s;
  while (score(hi, nullptr) > 0) {
    lo = hi;
    hi *= 2.0;
  }
  if (s <= lo || s >= hi) s = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    double deriv = 0;
    const double f = score(s, &deriv);
    if (f > 0) {
      lo = s;
    } else {
      hi = s;
    }
    double next = s - f / deriv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool converged = std::abs(next - s) <= 1e-9 * s;
    s = next;
    if (converged || (hi - lo) <= 1e-12 * s) break;
  }
  double sum_e = 0;
  for (double x : xs) sum_e += std::exp(-(x - xmin) / s);
  const double loc = xmin - s * std::log(sum_e / n);
  return {loc, s};
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

void check_age(const CitationNetwork& net, Period cohort, Period age) {
  if (cohort < 0 || cohort > net.last_period()) {
    throw LookupError("unknown cohort " + std::to_string(cohort));
  }
  if (age < 1) throw CensoringError("age must be >= 1");
  if (cohort + age - 1 > net.last_period()) {
    throw CensoringError("cohort " + std::to_string(cohort) + " has not reached age " +
                         std::to_string(age) + " by T=" + std::to_string(net.last_period()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<SeriesRow> series(std::span<const DisruptionRecord> records) {
  struct Acc {
    Accumulator cd, nok, rk, nij;
    std::size_t n = 0;
  };
  std::map<Period, Acc> by_period;
  for (const auto& r : records) {
    Acc& a = by_period[r.cohort];
    ++a.n;
    if (r.cd) {
      a.cd.add(*r.cd);
      a.nij.add(static_cast<double>(r.n_ij()));
    }
    if (r.cd_nok) a.nok.add(*r.cd_nok);
    if (r.r_k) a.rk.add(*r.r_k);
  }
  std::vector<SeriesRow> rows;
  rows.reserve(by_period.size());
  for (const auto& [t, a] : by_period) {
    rows.push_back({t, a.cd.mean(), a.nok.mean(), a.rk.mean(), a.nij.mean(), a.n, a.cd.n});
  }
  return rows;
}

std::vector<EnsembleRow> ensemble_series(std::span<const std::vector<SeriesRow>> members) {
  std::map<Period, std::vector<const SeriesRow*>> by_period;
  for (const auto& m : members) {
    for (const auto& row : m) by_period[row.period].push_back(&row);
  }
  std::vector<EnsembleRow> out;
  for (const auto& [t, rows] : by_period) {
    std::vector<double> cd, nok, rkv, nij;
    for (const SeriesRow* r : rows) {
      if (r->mean_cd) cd.push_back(*r->mean_cd);
      if (r->mean_cd_nok) nok.push_back(*r->mean_cd_nok);
      if (r->mean_rk) rkv.push_back(*r->mean_rk);
      if (r->mean_nij) nij.push_back(*r->mean_nij);
    }
    EnsembleRow e;
    e.period = t;
    e.members = rows.size();
    mean_se(cd, e.mean_cd, e.se_cd);
    mean_se(nok, e.mean_cd_nok, e.se_cd_nok);
    mean_se(rkv, e.mean_rk, e.se_rk);
    mean_se(nij, e.mean_nij, e.se_nij);
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> cd_values(std::span<const DisruptionRecord> records, Period first,
                              Period last) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.cd && r.cohort >= first && r.cohort <= last) out.push_back(*r.cd);
  }
  return out;
}

std::vector<IntervalHistogram> cd_distribution(std::span<const DisruptionRecord> records,
                                               Period interval, Period first, Period last) {
  if (interval < 1) throw DomainError("interval must be >= 1");
  if (first > last) return {};
  if ((last - first + 1) % interval != 0) {
    throw DomainError("interval " + std::to_string(interval) + " does not divide [" +
                      std::to_string(first) + ", " + std::to_string(last) + "]");
  }
  const std::vector<double> pooled = cd_values(records, first, last);

  double lo = 0, width = 1;
  std::size_t nbins = 1;
  if (!pooled.empty()) {
    const auto [mn, mx] = std::minmax_element(pooled.begin(), pooled.end());
    lo = *mn;
    const double range = *mx - *mn;
    const double iqr = quantile(pooled, 0.75) - quantile(pooled, 0.25);
    width = 2.0 * iqr / std::cbrt(static_cast<double>(pooled.size()));
    if (range == 0.0) {
      lo = *mn - 0.5;
      width = 1.0;
    } else if (!(width > 0.0)) {
      // Sturges fallback when the interquartile range collapses.
      width = range / (std::ceil(std::log2(static_cast<double>(pooled.size()))) + 1.0);
    }
    const double span_hi = range == 0.0 ? *mx + 0.5 : *mx;
    nbins = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil((span_hi - lo) / width)));
    nbins = std::min<std::size_t>(nbins, 100000);
    if (range != 0.0) width = (span_hi - lo) / static_cast<double>(nbins);
  }

  std::vector<IntervalHistogram> out;
  for (Period start = first; start <= last; start += interval) {
    IntervalHistogram h;
    h.first = start;
    h.last = start + interval - 1;
    const std::vector<double> vals = cd_values(records, h.first, h.last);
    h.n = vals.size();
    std::vector<std::size_t> counts(nbins, 0);
    for (double v : vals) {
      auto b = static_cast<std::size_t>(std::floor((v - lo) / width));
      counts[std::min(b, nbins - 1)]++;
    }
    if (!vals.empty()) {
      h.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    }
    h.bins.reserve(nbins);
    for (std::size_t b = 0; b < nbins; ++b) {
      const double left = lo + width * static_cast<double>(b);
      const double density =
          vals.empty() ? 0.0
                       : static_cast<double>(counts[b]) / (static_cast<double>(vals.size()) * width);
      h.bins.push_back({left, left + width, density});
    }
    out.push_back(std::move(h));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string family_name(Family family) {
  switch (family) {
    case Family::kGumbelMax:
      return "gumbel_max";
    case Family::kGumbelMin:
      return "gumbel_min";
    case Family::kLognormal:
      return "lognormal";
    case Family::kNormal:
      return "normal";
  }
  return "normal";
}

double gumbel_cdf(double x, double location, double scale, bool maximum) {
  if (maximum) return std::exp(-std::exp(-(x - location) / scale));
  return 1.0 - std::exp(-std::exp((x - location) / scale));
}

double normal_cdf(double x, double location, double scale) {
  return 0.5 * std::erfc(-(x - location) / (scale * std::sqrt(2.0)));
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw FitError("empty sample");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const auto n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return std::clamp(d, 0.0, 1.0);
}

FitResult fit_gumbel(std::span<const double> samples, bool maximum) {
  check_fit_input(samples);
  std::vector<double> xs(samples.begin(), samples.end());
  if (!maximum) {
    for (double& x : xs) x = -x;
  }
  auto [loc, scale] = gumbel_max_mle(xs);
  FitResult fit;
  fit.n = xs.size();
  fit.scale = scale;
  fit.log_likelihood = gumbel_log_likelihood(xs, loc, scale);
  if (maximum) {
    fit.family = Family::kGumbelMax;
    fit.location = loc;
  } else {
    fit.family = Family::kGumbelMin;
    fit.location = -loc;
  }
  fit.ks_stat = ks_statistic(samples, [&](double x) {
    return gumbel_cdf(x, fit.location, fit.scale, maximum);
  });
  return fit;
}

FitResult fit_extreme_value(std::span<const double> samples) {
  FitResult max_fit = fit_gumbel(samples, true);
  FitResult min_fit = fit_gumbel(samples, false);
  return max_fit.log_likelihood >= min_fit.log_likelihood ? max_fit : min_fit;
}

FitResult fit_normal(std::span<const double> samples) {
  check_fit_input(samples);
  const auto [mu, sigma] = location_scale(samples);
  FitResult fit;
  fit.family = Family::kNormal;
  fit.location = mu;
  fit.scale = sigma;
  fit.n = samples.size();
  const auto n = static_cast<double>(samples.size());
  fit.log_likelihood = -0.5 * n * (std::log(2.0 * kPi * sigma * sigma) + 1.0);
  fit.ks_stat = ks_statistic(samples, [&](double x) { return normal_cdf(x, mu, sigma); });
  return fit;
}

FitResult fit_lognormal(std::span<const double> samples) {
  std::vector<double> logs;
  logs.reserve(samples.size());
  double sum_log = 0;
  for (double x : samples) {
    if (!(x > 0.0)) throw FitError("lognormal fit requires positive samples");
    logs.push_back(std::log(x));
    sum_log += logs.back();
  }
  FitResult fit = fit_normal(logs);
  fit.family = Family::kLognormal;
  fit.log_likelihood -= sum_log;
  const double mu = fit.location, sigma = fit.scale;
  fit.ks_stat = ks_statistic(samples, [&](double x) {
    return normal_cdf(std::log(x), mu, sigma);
  });
  return fit;
}

// ---------------------------------------------------------------------------

std::pair<double, double> location_scale(std::span<const double> values) {
  if (values.empty()) return {kNaN, kNaN};
  const auto n = static_cast<double>(values.size());
  const double mu = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return {mu, std::sqrt(ss / n)};
}

ZNormResult znorm_citations(const CitationNetwork& net, Period horizon) {
  if (horizon < 0 || horizon > net.last_period()) {
    throw CensoringError("horizon " + std::to_string(horizon) + " outside [0, T]");
  }
  ZNormResult out;
  out.z.assign(net.num_nodes(), kNaN);
  for (Period t = 0; t <= horizon; ++t) {
    const NodeRange nodes = net.cohort_nodes(t);
    std::vector<double> logs;
    logs.reserve(nodes.size());
    for (NodeId v = nodes.first; v < nodes.last; ++v) {
      logs.push_back(std::log1p(static_cast<double>(net.citations_before(v, horizon + 1))));
    }
    CohortLogStats st;
    st.cohort = t;
    st.n = logs.size();
    if (!logs.empty()) std::tie(st.mu, st.sigma) = location_scale(logs);
    st.degenerate = logs.empty() || st.sigma == 0.0;
    if (!st.degenerate) {
      for (std::size_t i = 0; i < logs.size(); ++i) {
        out.z[nodes.first + i] = (logs[i] - st.mu) / st.sigma;
      }
    }
    out.cohorts.push_back(st);
  }
  return out;
}

std::vector<ReferenceAgeRow> mean_reference_age(const CitationNetwork& net) {
  std::vector<ReferenceAgeRow> rows;
  for (Period t = 1; t <= net.last_period(); ++t) {
    const NodeRange nodes = net.cohort_nodes(t);
    double sum = 0;
    std::size_t edges = 0;
    for (NodeId a = nodes.first; a < nodes.last; ++a) {
      for (NodeId b : net.references(a)) {
        sum += static_cast<double>(t - net.cohort(b));
        ++edges;
      }
    }
    rows.push_back({t, edges ? sum / static_cast<double>(edges) : 0.0, edges});
  }
  return rows;
}

std::vector<CohortFraction> fraction_below(const CitationNetwork& net,
                                           std::int64_t max_citations, Period tau) {
  if (tau < 1) throw CensoringError("age must be >= 1");
  std::vector<CohortFraction> out;
  for (Period t = 1; t + tau - 1 <= net.last_period(); ++t) {
    const NodeRange nodes = net.cohort_nodes(t);
    std::size_t below = 0;
    for (NodeId v = nodes.first; v < nodes.last; ++v) {
      const auto c = static_cast<std::int64_t>(net.citers_in_cohorts(v, 0, t + tau - 1).size());
      below += c <= max_citations ? 1 : 0;
    }
    const double frac =
        nodes.empty() ? 0.0 : static_cast<double>(below) / static_cast<double>(nodes.size());
    out.push_back({t, frac});
  }
  return out;
}

std::vector<double> lifecycle(const CitationNetwork& net, Period cohort,
                              std::optional<Period> max_age) {
  const Period ages = max_age.value_or(net.last_period() - cohort + 1);
  check_age(net, cohort, ages);
  const NodeRange nodes = net.cohort_nodes(cohort);
  std::vector<double> out(static_cast<std::size_t>(ages), 0.0);
  if (nodes.empty()) return out;
  for (NodeId v = nodes.first; v < nodes.last; ++v) {
    for (NodeId c : net.citers_in_cohorts(v, cohort, cohort + ages - 1)) {
      out[static_cast<std::size_t>(net.cohort(c) - cohort)] += 1.0;
    }
  }
  for (double& x : out) x /= static_cast<double>(nodes.size());
  return out;
}

std::vector<ShareRow> citation_share(const CitationNetwork& net, Period cohort,
                                     double top_fraction, Period tau_rank) {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw DomainError("top_fraction must lie in (0, 1]");
  }
  check_age(net, cohort, tau_rank);
  const NodeRange nodes = net.cohort_nodes(cohort);
  if (nodes.empty()) return {};

  std::vector<NodeId> order(nodes.size());
  std::iota(order.begin(), order.end(), nodes.first);
  const Period rank_end = cohort + tau_rank - 1;
  std::vector<std::size_t> at_rank(nodes.size());
  for (NodeId v = nodes.first; v < nodes.last; ++v) {
    at_rank[v - nodes.first] = net.citers_in_cohorts(v, 0, rank_end).size();
  }
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return at_rank[a - nodes.first] > at_rank[b - nodes.first];
  });
  const auto top_size = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(nodes.size()) - 1e-9)));
  std::vector<bool> in_top(nodes.size(), false);
  for (std::size_t i = 0; i < top_size && i < order.size(); ++i) in_top[order[i] - nodes.first] = true;

  std::vector<ShareRow> out;
  for (Period age = tau_rank; cohort + age - 1 <= net.last_period(); ++age) {
    double top = 0, total = 0;
    for (NodeId v = nodes.first; v < nodes.last; ++v) {
      const auto c = static_cast<double>(net.citers_in_cohorts(v, 0, cohort + age - 1).size());
      total += c;
      if (in_top[v - nodes.first]) top += c;
    }
    ShareRow row;
    row.age = age;
    row.top_share = total > 0 ? top / total : kNaN;
    row.rest_share = total > 0 ? (total - top) / total : kNaN;
    out.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------

double correlate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw CorrelationError("need two sequences of equal length >= 3");
  }
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw CorrelationError("zero variance");
  return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw CorrelationError("need two sequences of equal length >= 3");
  }
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return correlate(rx, ry);
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw CorrelationError("need two sequences of equal length >= 2");
  }
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw CorrelationError("zero variance in x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= values.size()) return values.back();
  return values[i] + frac * (values[i + 1] - values[i]);
}

}  // namespace citeinfl
