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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace citeinfl {

// Per-observation dependent value, named covariates and a fixed-effect group.
struct ObservationTable {
  std::vector<std::string> covariate_names;
  std::vector<double> y;
  std::vector<std::int64_t> period;
  std::vector<std::vector<double>> covariates;  // one column per name

  std::size_t rows() const { return y.size(); }
  void add_row(double y_value, std::int64_t period_label, std::span<const double> values);
  // Throws DomainError on ragged columns, duplicate names or non-finite values.
  void validate() const;
};

struct Coefficient {
  std::string term;
  double estimate = 0;
  double std_error = 0;
  double t_stat = 0;
  double p_value = 1;
};

// y = b0 + sum_c b_c x_c + sum_{g != baseline} d_g D_g + e, estimated by OLS.
struct FixedEffectsModel {
  std::vector<Coefficient> terms;  // "(intercept)", covariates, then "period[g]"
  std::vector<std::string> covariate_names;
  std::vector<double> covariate_means;
  std::vector<std::int64_t> periods;   // distinct labels, ascending
  std::vector<double> period_shares;   // sample share of each label
  std::int64_t baseline = 0;
  std::size_t n = 0;
  std::size_t dof = 0;
  double r2 = 0;
  double sigma2 = 0;
  std::vector<double> fitted;
  std::vector<double> residuals;

  const Coefficient& term(const std::string& name) const;
  // Fixed-effect offset of a period relative to the intercept (0 for baseline).
  double period_effect(std::int64_t period) const;
};

struct FixedEffectsOptions {
  // Label dropped from the dummy set; defaults to the smallest period.
  std::optional<std::int64_t> baseline;
};

// Fixed effects are absorbed by within-period demeaning; covariate slopes
// come from a column-pivoted Householder QR of the demeaned design, which is
// algebraically identical to OLS on the full dummy design. A single period
// reduces to plain OLS with an intercept.
FixedEffectsModel ols_fixed_effects(const ObservationTable& table,
                                    const FixedEffectsOptions& options = {});

// Predicted y over `grid` for covariate `var`, other covariates at their
// sample means and fixed effects at their sample-weighted average.
std::vector<double> marginal_effect(const FixedEffectsModel& model, const std::string& var,
                                    std::span<const double> grid);

}  // namespace citeinfl
