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

#include "citeinfl/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "citeinfl/errors.hpp"
#include "citeinfl/parallel.hpp"

namespace citeinfl {

double BetaSchedule::at(Period t) const {
  switch (mode) {
    case Mode::kZero:
      return 0.0;
    case Mode::kLinear400:
      return static_cast<double>(t) / 400.0;
    case Mode::kConstant:
      return value;
  }
  return 0.0;
}

std::string BetaSchedule::mode_name(Mode mode) {
  switch (mode) {
    case Mode::kZero:
      return "zero";
    case Mode::kLinear400:
      return "linear400";
    case Mode::kConstant:
      return "constant";
  }
  return "zero";
}

BetaSchedule::Mode BetaSchedule::parse_mode(const std::string& name) {
  if (name == "zero") return Mode::kZero;
  if (name == "linear400") return Mode::kLinear400;
  if (name == "constant") return Mode::kConstant;
  throw ConfigError("unknown beta_mode '" + name + "'");
}

void GeneratorConfig::validate() const {
  schedule.validate();
  if (!(c_cross > 0.0) || !std::isfinite(c_cross)) throw ConfigError("c_cross must be > 0");
  if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
  for (Period t = 0; t <= schedule.T; ++t) {
    const double b = beta.at(t);
    if (!(b >= 0.0 && b < 1.0)) {
      throw ConfigError("beta(" + std::to_string(t) + ") = " + std::to_string(b) +
                        " outside [0, 1)");
    }
  }
}

double lambda_of_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw DomainError("beta must lie in [0, 1), got " + std::to_string(beta));
  }
  return beta / (1.0 - beta);
}

double beta_at(const GeneratorConfig& config, Period t) {
  if (t < 0) throw DomainError("negative period");
  return config.beta.at(t);
}

double attractiveness(const CitationNetwork& net, NodeId b, Period t,
                      const GeneratorConfig& config) {
  const Period tb = net.cohort(b);
  const double crowding = std::pow(static_cast<double>(net.cohort_size(tb)), config.alpha);
  return (config.c_cross + static_cast<double>(net.citations_before(b, t))) * crowding;
}

// --- ExclusionSet ---

void ExclusionSet::clear() {
  ids_.clear();
  prefix_.assign(1, 0.0);
}

bool ExclusionSet::contains(NodeId v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

void ExclusionSet::insert(NodeId v, double weight) {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it != ids_.end() && *it == v) return;
  const auto pos = static_cast<std::size_t>(it - ids_.begin());
  ids_.insert(it, v);
  prefix_.push_back(0.0);
  for (std::size_t i = ids_.size(); i > pos + 1; --i) prefix_[i] = prefix_[i - 1] + weight;
  prefix_[pos + 1] = prefix_[pos] + weight;
}

double ExclusionSet::weight_below(NodeId bound) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), bound);
  return prefix_[static_cast<std::size_t>(it - ids_.begin())];
}

// --- AttractivenessIndex ---

AttractivenessIndex AttractivenessIndex::freeze(const CitationNetwork& net, Period t,
                                                const GeneratorConfig& config) {
  const NodeRange live{0, net.cohort_nodes(t).last};
  std::vector<double> log_weights(live.size());
  std::vector<double> log_crowding(static_cast<std::size_t>(t) + 1);
  for (Period c = 0; c <= t; ++c) {
    log_crowding[c] = config.alpha * std::log(static_cast<double>(net.cohort_size(c)));
  }
  double max_log = -HUGE_VAL;
  for (NodeId v = live.first; v < live.last; ++v) {
    const double lw =
        std::log(config.c_cross + static_cast<double>(net.citations_before(v, t))) +
        log_crowding[net.cohort(v)];
    log_weights[v] = lw;
    max_log = std::max(max_log, lw);
  }
  for (double& lw : log_weights) lw = std::exp(lw - max_log);
  return from_weights(std::move(log_weights), t);
}

AttractivenessIndex AttractivenessIndex::from_weights(std::vector<double> weights, Period t) {
  AttractivenessIndex index;
  index.frozen_at_ = t;
  index.cumulative_.resize(weights.size() + 1);
  index.cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw DomainError("sampling weights must be positive and finite");
    }
    index.cumulative_[i + 1] = index.cumulative_[i] + weights[i];
  }
  index.weights_ = std::move(weights);
  return index;
}

double AttractivenessIndex::effective_prefix(std::size_t i, const ExclusionSet& exclude) const {
  return cumulative_[i] - exclude.weight_below(static_cast<NodeId>(i));
}

NodeId AttractivenessIndex::sample(const ExclusionSet& exclude, RngStream& rng) const {
  const std::size_t n = weights_.size();
  std::size_t excluded_in_range = 0;
  for (NodeId v : exclude.ids()) excluded_in_range += v < n ? 1 : 0;
  if (excluded_in_range >= n) throw ExhaustionError("no eligible node to cite");

  const double total = effective_prefix(n, exclude);
  const double u = rng.uniform() * total;
  // Largest i whose effective prefix does not exceed u.
  std::size_t lo = 0, hi = n - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (effective_prefix(mid, exclude) <= u) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  // Rounding can land on a zero-width (excluded) slot; move to a neighbour.
  auto pick = static_cast<NodeId>(lo);
  if (exclude.contains(pick)) {
    NodeId up = pick;
    while (up < n && exclude.contains(up)) ++up;
    if (up < n) return up;
    NodeId down = pick;
    while (down > 0 && exclude.contains(down)) --down;
    return down;
  }
  return pick;
}

NodeId sample_direct(const AttractivenessIndex& index, const ExclusionSet& exclude,
                     RngStream& rng) {
  return index.sample(exclude, rng);
}

std::int64_t sample_redirect_count(std::int64_t r_b, double lambda, RngStream& rng) {
  if (r_b <= 0 || lambda <= 0.0) return 0;
  const double q = std::min(lambda / static_cast<double>(r_b), 1.0);
  if (q >= 1.0) return r_b;
  // Inversion from k = 0; r_b is a reference-list length, so the walk is short.
  const double log_fail = std::log1p(-q);
  double pk = std::exp(static_cast<double>(r_b) * log_fail);
  if (pk <= 0.0) {
    std::int64_t x = 0;
    for (std::int64_t i = 0; i < r_b; ++i) x += rng.uniform() < q ? 1 : 0;
    return x;
  }
  const double odds = q / (1.0 - q);
  double u = rng.uniform();
  std::int64_t k = 0;
  while (u >= pk && k < r_b) {
    u -= pk;
    pk *= odds * static_cast<double>(r_b - k) / static_cast<double>(k + 1);
    ++k;
  }
  return k;
}

std::vector<NodeId> sample_redirect_targets(const AttractivenessIndex& index,
                                            std::span<const NodeId> refs_b,
                                            std::int64_t x, const ExclusionSet& exclude,
                                            RngStream& rng) {
  std::vector<NodeId> eligible;
  eligible.reserve(refs_b.size());
  for (NodeId v : refs_b) {
    if (!exclude.contains(v)) eligible.push_back(v);
  }
  if (x <= 0) return {};
  if (static_cast<std::size_t>(x) >= eligible.size()) return eligible;

  std::vector<double> weights(eligible.size());
  for (std::size_t i = 0; i < eligible.size(); ++i) weights[i] = index.weight(eligible[i]);
  std::vector<NodeId> chosen;
  chosen.reserve(static_cast<std::size_t>(x));
  while (chosen.size() < static_cast<std::size_t>(x)) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double u = rng.uniform() * total;
    std::size_t pick = 0;
    for (; pick + 1 < eligible.size(); ++pick) {
      if (u < weights[pick]) break;
      u -= weights[pick];
    }
    chosen.push_back(eligible[pick]);
    eligible.erase(eligible.begin() + static_cast<std::ptrdiff_t>(pick));
    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return chosen;
}

ReferenceList build_reference_list(const CitationNetwork& net, NodeId a, Period t,
                                   const AttractivenessIndex& index,
                                   const GeneratorConfig& config, RngStream& rng) {
  if (net.cohort(a) != t) {
    throw OrderingError("node " + std::to_string(a) + " is not in cohort " + std::to_string(t));
  }
  if (index.frozen_at() != t) throw OrderingError("attractiveness index frozen at another period");
  const auto target = static_cast<std::size_t>(schedule_r(config.schedule, t));
  const double lambda = lambda_of_beta(config.beta.at(t));

  ReferenceList list;
  list.refs.reserve(target);
  list.mechanisms.reserve(target);
  ExclusionSet exclude;
  exclude.insert(a, index.weight(a));

  while (list.refs.size() < target) {
    const NodeId b = sample_direct(index, exclude, rng);
    list.refs.push_back(b);
    list.mechanisms.push_back(Mechanism::kDirect);
    exclude.insert(b, index.weight(b));
    if (list.refs.size() == target) break;

    // Only reference lists fixed before period t are visible to redirection.
    const auto refs_b =
        net.cohort(b) < t ? net.references(b) : std::span<const NodeId>{};
    const std::int64_t x =
        sample_redirect_count(static_cast<std::int64_t>(refs_b.size()), lambda, rng);
    if (x == 0) continue;
    std::vector<NodeId> batch = sample_redirect_targets(index, refs_b, x, exclude, rng);

    const std::size_t room = target - list.refs.size();
    if (batch.size() > room) {
      // Keep a uniformly random subset of size `room`, preserving draw order.
      std::vector<std::size_t> slots(batch.size());
      std::iota(slots.begin(), slots.end(), 0);
      for (std::size_t i = 0; i < room; ++i) {
        const std::size_t j = i + rng.below(slots.size() - i);
        std::swap(slots[i], slots[j]);
      }
      slots.resize(room);
      std::sort(slots.begin(), slots.end());
      std::vector<NodeId> kept;
      kept.reserve(room);
      for (std::size_t s : slots) kept.push_back(batch[s]);
      batch = std::move(kept);
    }
    for (NodeId v : batch) {
      list.refs.push_back(v);
      list.mechanisms.push_back(Mechanism::kRedirect);
      exclude.insert(v, index.weight(v));
    }
  }
  return list;
}

CitationNetwork generate(const GeneratorConfig& config, const GenerateOptions& options) {
  config.validate();
  const unsigned threads = resolve_threads(options.threads);
  CitationNetwork net;
  net.add_cohort(0, static_cast<std::size_t>(primordial_size(config.schedule)));
  std::vector<ReferenceList> lists;
  for (Period t = 1; t <= config.schedule.T; ++t) {
    const NodeRange cohort =
        net.add_cohort(t, static_cast<std::size_t>(schedule_n(config.schedule, t)));
    const AttractivenessIndex index = AttractivenessIndex::freeze(net, t, config);
    lists.assign(cohort.size(), {});
    parallel_for(cohort.size(), threads, [&](std::size_t i, unsigned) {
      const NodeId a = cohort.first + static_cast<NodeId>(i);
      RngStream rng = RngStream::substream(config.seed, a);
      lists[i] = build_reference_list(net, a, t, index, config, rng);
    });
    for (std::size_t i = 0; i < cohort.size(); ++i) {
      net.commit_references(cohort.first + static_cast<NodeId>(i), lists[i].refs,
                            lists[i].mechanisms);
    }
  }
  return net;
}

}  // namespace citeinfl
