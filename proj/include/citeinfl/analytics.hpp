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

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citeinfl/disruption.hpp"
#include "citeinfl/netcore.hpp"

namespace citeinfl {

// ---------------------------------------------------------------------------
// Per-period aggregates of disruption records.

struct SeriesRow {
  Period period = 0;
  std::optional<double> mean_cd;      // over records with defined cd
  std::optional<double> mean_cd_nok;  // over records with N_i + N_j > 0
  std::optional<double> mean_rk;      // same subset as mean_cd_nok
  std::optional<double> mean_nij;     // over records with defined cd
  std::size_t n = 0;                  // all records in the period
  std::size_t n_defined = 0;          // records with defined cd
};

// One row per period present in `records`, ascending.
std::vector<SeriesRow> series(std::span<const DisruptionRecord> records);

// Across-member mean and standard error of per-period means.
struct EnsembleRow {
  Period period = 0;
  double mean_cd = 0, se_cd = 0;
  double mean_cd_nok = 0, se_cd_nok = 0;
  double mean_rk = 0, se_rk = 0;
  double mean_nij = 0, se_nij = 0;
  std::size_t members = 0;
};

std::vector<EnsembleRow> ensemble_series(std::span<const std::vector<SeriesRow>> members);

// ---------------------------------------------------------------------------
// CD distributions over fixed-length period intervals.

struct HistogramBin {
  double left = 0, right = 0, density = 0;
};

struct IntervalHistogram {
  Period first = 0, last = 0;
  std::size_t n = 0;
  std::optional<double> mean;
  std::vector<HistogramBin> bins;
};

// Splits [first, last] into consecutive intervals of `interval` periods
// (which must divide the range) and histograms the defined cd values of each,
// using one Freedman-Diaconis binning shared by all intervals.
std::vector<IntervalHistogram> cd_distribution(std::span<const DisruptionRecord> records,
                                               Period interval, Period first, Period last);

// Defined cd values of records whose cohort lies in [first, last].
std::vector<double> cd_values(std::span<const DisruptionRecord> records, Period first,
                              Period last);

// ---------------------------------------------------------------------------
// Distribution fits.

enum class Family { kGumbelMax, kGumbelMin, kLognormal, kNormal };
std::string family_name(Family family);

struct FitResult {
  Family family = Family::kNormal;
  double location = 0;
  double scale = 1;
  double ks_stat = 0;
  double log_likelihood = 0;
  std::size_t n = 0;
};

double gumbel_cdf(double x, double location, double scale, bool maximum = true);
double normal_cdf(double x, double location, double scale);

// Kolmogorov-Smirnov distance between the sample and a continuous CDF.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

// Maximum-likelihood Gumbel fit, max- or min-oriented. Requires n >= 30 and
// nonzero variance.
FitResult fit_gumbel(std::span<const double> samples, bool maximum);
// Fits both orientations and keeps the one with the larger likelihood.
FitResult fit_extreme_value(std::span<const double> samples);
FitResult fit_normal(std::span<const double> samples);
// Requires strictly positive samples.
FitResult fit_lognormal(std::span<const double> samples);

// ---------------------------------------------------------------------------
// Citation regularities.

struct CohortLogStats {
  Period cohort = 0;
  std::size_t n = 0;
  double mu = 0;     // mean of ln(c + 1)
  double sigma = 0;  // population standard deviation of ln(c + 1)
  bool degenerate = false;
};

struct ZNormResult {
  std::vector<double> z;  // per node; NaN for nodes of degenerate cohorts
  std::vector<CohortLogStats> cohorts;
};

// z = (ln(c + 1) - mu_t) / sigma_t with citations tallied through `horizon`.
ZNormResult znorm_citations(const CitationNetwork& net, Period horizon);

// Mean and population standard deviation.
std::pair<double, double> location_scale(std::span<const double> values);

struct ReferenceAgeRow {
  Period period = 0;
  double mean_age = 0;
  std::size_t edges = 0;
};

// Mean (citing cohort - cited cohort) over references made in each period >= 1.
std::vector<ReferenceAgeRow> mean_reference_age(const CitationNetwork& net);

// Age convention: a node of cohort t is of age tau during period t + tau - 1.

struct CohortFraction {
  Period cohort = 0;
  double fraction = 0;
};

// Per cohort t >= 1 with t + tau - 1 <= T: share of nodes with at most
// `max_citations` citations received by age tau.
std::vector<CohortFraction> fraction_below(const CitationNetwork& net,
                                           std::int64_t max_citations, Period tau);

// Mean new citations per node at ages 1..max_age (default: through T).
std::vector<double> lifecycle(const CitationNetwork& net, Period cohort,
                              std::optional<Period> max_age = std::nullopt);

struct ShareRow {
  Period age = 0;
  double top_share = 0;   // NaN while the cohort has no citations
  double rest_share = 0;  // complementary group
};

// Nodes of `cohort` are ranked by citations at age tau_rank (ties by id); the
// top ceil(top_fraction * size) of them form the top group. Returns the share
// of the cohort's cumulative citations held by each group at every age from
// tau_rank through T.
std::vector<ShareRow> citation_share(const CitationNetwork& net, Period cohort,
                                     double top_fraction, Period tau_rank);

// ---------------------------------------------------------------------------
// Small statistics helpers.

double correlate(std::span<const double> xs, std::span<const double> ys);
double spearman(std::span<const double> xs, std::span<const double> ys);

struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

double quantile(std::vector<double> values, double q);

}  // namespace citeinfl
