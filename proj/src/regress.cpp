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

#include "citeinfl/regress.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <map>
#include <set>

#include "citeinfl/errors.hpp"

namespace citeinfl {
namespace {

double two_sided_p(double t, std::size_t dof) {
  if (!std::isfinite(t)) return 0.0;
  if (dof == 0) return 1.0;
  const boost::math::students_t dist(static_cast<double>(dof));
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

Coefficient make_coefficient(std::string term, double estimate, double variance,
                             std::size_t dof) {
  Coefficient c;
  c.term = std::move(term);
  c.estimate = estimate;
  c.std_error = std::sqrt(std::max(variance, 0.0));
  c.t_stat = c.std_error > 0 ? estimate / c.std_error
                             : std::copysign(HUGE_VAL, estimate == 0 ? 0.0 : estimate);
  if (estimate == 0 && c.std_error == 0) c.t_stat = 0;
  c.p_value = two_sided_p(c.t_stat, dof);
  return c;
}

}  // namespace

void ObservationTable::add_row(double y_value, std::int64_t period_label,
                               std::span<const double> values) {
  if (values.size() != covariate_names.size()) {
    throw DomainError("row has " + std::to_string(values.size()) + " covariates, expected " +
                      std::to_string(covariate_names.size()));
  }
  if (covariates.size() != covariate_names.size()) covariates.resize(covariate_names.size());
  y.push_back(y_value);
  period.push_back(period_label);
  for (std::size_t c = 0; c < values.size(); ++c) covariates[c].push_back(values[c]);
}

void ObservationTable::validate() const {
  std::set<std::string> names(covariate_names.begin(), covariate_names.end());
  if (names.size() != covariate_names.size()) throw DomainError("duplicate covariate names");
  if (covariates.size() != covariate_names.size()) throw DomainError("covariate columns missing");
  if (period.size() != y.size()) throw DomainError("period column length mismatch");
  for (const auto& col : covariates) {
    if (col.size() != y.size()) throw DomainError("ragged covariate column");
    for (double v : col) {
      if (!std::isfinite(v)) throw DomainError("non-finite covariate value");
    }
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw DomainError("non-finite dependent value");
  }
}

const Coefficient& FixedEffectsModel::term(const std::string& name) const {
  for (const auto& c : terms) {
    if (c.term == name) return c;
  }
  throw LookupError("no term '" + name + "' in model");
}

double FixedEffectsModel::period_effect(std::int64_t p) const {
  if (p == baseline) return 0.0;
  return term("period[" + std::to_string(p) + "]").estimate;
}

FixedEffectsModel ols_fixed_effects(const ObservationTable& table,
                                    const FixedEffectsOptions& options) {
  table.validate();
  const std::size_t n = table.rows();
  const std::size_t k = table.covariate_names.size();

  std::map<std::int64_t, std::size_t> group_of;
  for (std::int64_t p : table.period) group_of.emplace(p, 0);
  std::size_t g = 0;
  for (auto& [label, idx] : group_of) idx = g++;
  const std::size_t groups = group_of.size();

  FixedEffectsModel model;
  model.n = n;
  model.covariate_names = table.covariate_names;
  for (const auto& [label, idx] : group_of) model.periods.push_back(label);
  model.baseline = options.baseline.value_or(model.periods.empty() ? 0 : model.periods.front());
  if (!group_of.contains(model.baseline)) {
    throw DomainError("baseline period " + std::to_string(model.baseline) + " not in table");
  }
  const std::size_t params = 1 + k + (groups - 1);
  if (n <= params) {
    throw CollinearityError("need more observations (" + std::to_string(n) +
                            ") than parameters (" + std::to_string(params) + ")");
  }
  model.dof = n - params;

  // Group means of y and covariates.
  std::vector<std::size_t> group_n(groups, 0);
  std::vector<std::size_t> row_group(n);
  Eigen::MatrixXd group_mean = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(groups),
                                                     static_cast<Eigen::Index>(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t gi = group_of.at(table.period[i]);
    row_group[i] = gi;
    ++group_n[gi];
    group_mean(gi, 0) += table.y[i];
    for (std::size_t c = 0; c < k; ++c) group_mean(gi, c + 1) += table.covariates[c][i];
  }
  for (std::size_t gi = 0; gi < groups; ++gi) {
    group_mean.row(static_cast<Eigen::Index>(gi)) /= static_cast<double>(group_n[gi]);
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto gi = static_cast<Eigen::Index>(row_group[i]);
    y(i) = table.y[i] - group_mean(gi, 0);
    for (std::size_t c = 0; c < k; ++c) x(i, c) = table.covariates[c][i] - group_mean(gi, c + 1);
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  Eigen::MatrixXd cov_beta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                   static_cast<Eigen::Index>(k));
  if (k > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    // Relative threshold against the raw column scale, not the demeaned one.
    double scale = 0;
    for (std::size_t c = 0; c < k; ++c) {
      for (double v : table.covariates[c]) scale = std::max(scale, std::abs(v));
    }
    qr.setThreshold(1e-10);
    const double abs_tol = 1e-10 * std::max(1.0, scale) * std::sqrt(static_cast<double>(n));
    Eigen::Index rank = 0;
    const auto& r = qr.matrixR();
    for (Eigen::Index d = 0; d < std::min<Eigen::Index>(r.rows(), r.cols()); ++d) {
      if (std::abs(r(d, d)) > abs_tol) ++rank;
    }
    if (rank < static_cast<Eigen::Index>(k) || qr.rank() < static_cast<Eigen::Index>(k)) {
      const Eigen::Index eff = std::min(rank, qr.rank());
      std::string names;
      for (Eigen::Index d = eff; d < static_cast<Eigen::Index>(k); ++d) {
        if (!names.empty()) names += ", ";
        names += table.covariate_names[static_cast<std::size_t>(qr.colsPermutation().indices()(d))];
      }
      throw CollinearityError("design is rank deficient; collinear with intercept, period "
                              "dummies or other covariates: " + names);
    }
    beta = qr.solve(y);
    const auto upper = qr.matrixR().topLeftCorner(static_cast<Eigen::Index>(k),
                                                  static_cast<Eigen::Index>(k))
                           .triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        upper.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k),
                                              static_cast<Eigen::Index>(k)));
    const Eigen::MatrixXd perm = qr.colsPermutation();
    cov_beta = perm * (r_inv * r_inv.transpose()) * perm.transpose();
  }

  // Residuals on the original scale: e = y - alpha_g - x beta.
  Eigen::VectorXd alpha(static_cast<Eigen::Index>(groups));
  for (std::size_t gi = 0; gi < groups; ++gi) {
    const auto gg = static_cast<Eigen::Index>(gi);
    alpha(gg) = group_mean(gg, 0);
    for (std::size_t c = 0; c < k; ++c) {
      alpha(gg) -= group_mean(gg, static_cast<Eigen::Index>(c + 1)) * beta(static_cast<Eigen::Index>(c));
    }
  }
  model.fitted.resize(n);
  model.residuals.resize(n);
  double rss = 0, ybar = 0;
  for (double v : table.y) ybar += v;
  ybar /= static_cast<double>(n);
  double tss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double fit = alpha(static_cast<Eigen::Index>(row_group[i]));
    for (std::size_t c = 0; c < k; ++c) fit += table.covariates[c][i] * beta(static_cast<Eigen::Index>(c));
    model.fitted[i] = fit;
    model.residuals[i] = table.y[i] - fit;
    rss += model.residuals[i] * model.residuals[i];
    tss += (table.y[i] - ybar) * (table.y[i] - ybar);
  }
  model.sigma2 = rss / static_cast<double>(model.dof);
  model.r2 = tss > 0 ? 1.0 - rss / tss : 1.0;
  cov_beta *= model.sigma2;

  // Group intercepts are uncorrelated with the within-estimator slopes, so
  // Var(alpha_g) = s2 / n_g + m_g' V m_g, with m_g the group covariate means.
  auto group_means_x = [&](std::size_t gi) {
    Eigen::VectorXd m(static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c) {
      m(static_cast<Eigen::Index>(c)) = group_mean(static_cast<Eigen::Index>(gi), static_cast<Eigen::Index>(c + 1));
    }
    return m;
  };
  const std::size_t base = group_of.at(model.baseline);
  const Eigen::VectorXd m_base = group_means_x(base);
  const double var_alpha_base =
      model.sigma2 / static_cast<double>(group_n[base]) + m_base.dot(cov_beta * m_base);

  model.terms.push_back(make_coefficient("(intercept)", alpha(static_cast<Eigen::Index>(base)),
                                         var_alpha_base, model.dof));
  for (std::size_t c = 0; c < k; ++c) {
    const auto cc = static_cast<Eigen::Index>(c);
    model.terms.push_back(
        make_coefficient(table.covariate_names[c], beta(cc), cov_beta(cc, cc), model.dof));
  }
  for (const auto& [label, gi] : group_of) {
    if (gi == base) continue;
    const Eigen::VectorXd diff = group_means_x(gi) - m_base;
    const double var = model.sigma2 / static_cast<double>(group_n[gi]) +
                       model.sigma2 / static_cast<double>(group_n[base]) +
                       diff.dot(cov_beta * diff);
    model.terms.push_back(make_coefficient(
        "period[" + std::to_string(label) + "]",
        alpha(static_cast<Eigen::Index>(gi)) - alpha(static_cast<Eigen::Index>(base)), var,
        model.dof));
  }

  model.covariate_means.assign(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    for (double v : table.covariates[c]) model.covariate_means[c] += v;
    model.covariate_means[c] /= static_cast<double>(n);
  }
  for (std::size_t gi = 0; gi < groups; ++gi) {
    model.period_shares.push_back(static_cast<double>(group_n[gi]) / static_cast<double>(n));
  }
  return model;
}

std::vector<double> marginal_effect(const FixedEffectsModel& model, const std::string& var,
                                    std::span<const double> grid) {
  const auto it = std::find(model.covariate_names.begin(), model.covariate_names.end(), var);
  if (it == model.covariate_names.end()) throw LookupError("unknown variable '" + var + "'");
  const auto target = static_cast<std::size_t>(it - model.covariate_names.begin());

  double base = model.term("(intercept)").estimate;
  for (std::size_t p = 0; p < model.periods.size(); ++p) {
    base += model.period_shares[p] * model.period_effect(model.periods[p]);
  }
  for (std::size_t c = 0; c < model.covariate_names.size(); ++c) {
    if (c == target) continue;
    base += model.term(model.covariate_names[c]).estimate * model.covariate_means[c];
  }
  const double slope = model.term(var).estimate;
  std::vector<double> out;
  out.reserve(grid.size());
  for (double g : grid) out.push_back(base + slope * g);
  return out;
}

}  // namespace citeinfl
