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

#include "citeinfl/netcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "citeinfl/errors.hpp"

namespace citeinfl {
namespace {

std::int64_t floor_exponential(double base, double rate, Period t, int offset) {
  return static_cast<std::int64_t>(
      std::floor(base * std::exp(rate * static_cast<double>(t - offset))));
}

void check_schedule_domain(const GrowthSchedule& sched, Period t) {
  if (t < 1 || t > sched.T) {
    throw ScheduleDomainError("period " + std::to_string(t) + " outside [1, " +
                              std::to_string(sched.T) + "]");
  }
}

}  // namespace

void GrowthSchedule::validate() const {
  if (T < 1) throw ConfigError("T must be >= 1");
  if (!(n0 >= 1.0) || !std::isfinite(n0)) throw ConfigError("n0 must be >= 1");
  if (!(r0 >= 0.0) || !std::isfinite(r0)) throw ConfigError("r0 must be >= 0");
  if (!std::isfinite(g_n) || !std::isfinite(g_r)) throw ConfigError("growth rates must be finite");
  if (cap_period.has_value() != cap_value.has_value()) {
    throw ConfigError("T_star and r_cap must be given together");
  }
  if (cap_value && *cap_value < 0) throw ConfigError("r_cap must be >= 0");
  for (Period t = 1; t <= T; ++t) {
    if (schedule_n(*this, t) < 1) {
      throw ConfigError("n(t) drops below 1 at t=" + std::to_string(t));
    }
  }
}

std::int64_t schedule_n(const GrowthSchedule& sched, Period t) {
  check_schedule_domain(sched, t);
  return floor_exponential(sched.n0, sched.g_n, t, sched.period_offset);
}

std::int64_t schedule_r(const GrowthSchedule& sched, Period t) {
  check_schedule_domain(sched, t);
  if (sched.cap_period && t >= *sched.cap_period) return *sched.cap_value;
  return floor_exponential(sched.r0, sched.g_r, t, sched.period_offset);
}

std::int64_t primordial_size(const GrowthSchedule& sched) {
  return static_cast<std::int64_t>(std::floor(sched.n0));
}

NodeRange CitationNetwork::add_cohort(Period t, std::size_t size) {
  if (t != last_period() + 1) {
    throw OrderingError("expected cohort " + std::to_string(last_period() + 1) +
                        ", got " + std::to_string(t));
  }
  const auto first = static_cast<NodeId>(num_nodes());
  if (cohort_begin_.empty()) cohort_begin_.push_back(0);
  cohort_of_.insert(cohort_of_.end(), size, t);
  citers_.resize(num_nodes());
  cohort_begin_.push_back(static_cast<NodeId>(num_nodes()));
  return {first, static_cast<NodeId>(num_nodes())};
}

void CitationNetwork::commit_references(NodeId citing, std::span<const NodeId> refs,
                                        std::span<const Mechanism> mechanisms) {
  check_node(citing);
  if (citing < committed_until_) {
    throw OrderingError("references of node " + std::to_string(citing) +
                        " committed out of order");
  }
  if (!mechanisms.empty() && mechanisms.size() != refs.size()) {
    throw OrderingError("mechanism tags do not match reference count");
  }
  const Period t = cohort_of_[citing];
  if (t == 0 && !refs.empty()) {
    throw OrderingError("primordial node " + std::to_string(citing) + " cannot cite");
  }
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const NodeId v = refs[i];
    check_node(v);
    if (v == citing) throw OrderingError("self-citation of node " + std::to_string(v));
    if (cohort_of_[v] > t) {
      throw OrderingError("node " + std::to_string(citing) + " cites later node " +
                          std::to_string(v));
    }
  }
  std::vector<NodeId> sorted(refs.begin(), refs.end());
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    throw OrderingError("duplicate reference " + std::to_string(*dup) + " in node " +
                        std::to_string(citing));
  }

  // Nodes skipped over keep empty reference lists.
  ref_offsets_.resize(citing + 1, refs_.size());
  refs_.insert(refs_.end(), refs.begin(), refs.end());
  if (mechanisms.empty()) {
    mechanisms_.insert(mechanisms_.end(), refs.size(), Mechanism::kUnknown);
  } else {
    mechanisms_.insert(mechanisms_.end(), mechanisms.begin(), mechanisms.end());
  }
  ref_offsets_.push_back(refs_.size());
  committed_until_ = citing + 1;
  for (NodeId v : refs) citers_[v].push_back(citing);
}

Period CitationNetwork::cohort(NodeId v) const {
  check_node(v);
  return cohort_of_[v];
}

NodeRange CitationNetwork::cohort_nodes(Period t) const {
  if (t < 0 || t > last_period()) {
    throw LookupError("unknown cohort " + std::to_string(t));
  }
  return {cohort_begin_[t], cohort_begin_[t + 1]};
}

std::span<const NodeId> CitationNetwork::references(NodeId v) const {
  check_node(v);
  if (v >= committed_until_) return {};
  return {refs_.data() + ref_offsets_[v], ref_offsets_[v + 1] - ref_offsets_[v]};
}

std::span<const Mechanism> CitationNetwork::reference_mechanisms(NodeId v) const {
  check_node(v);
  if (v >= committed_until_) return {};
  return {mechanisms_.data() + ref_offsets_[v], ref_offsets_[v + 1] - ref_offsets_[v]};
}

std::span<const NodeId> CitationNetwork::citers(NodeId v) const {
  check_node(v);
  return citers_[v];
}

NodeId CitationNetwork::cohort_first_id(Period t) const {
  if (t <= 0) return 0;
  if (t > last_period()) return static_cast<NodeId>(num_nodes());
  return cohort_begin_[t];
}

std::span<const NodeId> CitationNetwork::citers_in_cohorts(NodeId v, Period first,
                                                           Period last) const {
  const auto& list = citers_[(check_node(v), v)];
  if (first > last) return {};
  const auto lo = std::lower_bound(list.begin(), list.end(), cohort_first_id(first));
  const auto hi = std::lower_bound(lo, list.end(), cohort_first_id(last + 1));
  return {list.data() + (lo - list.begin()), static_cast<std::size_t>(hi - lo)};
}

std::size_t CitationNetwork::citations_before(NodeId v, Period t) const {
  return citers_in_cohorts(v, 0, t - 1).size();
}

void CitationNetwork::check_node(NodeId v) const {
  if (v >= num_nodes()) throw LookupError("unknown node " + std::to_string(v));
}

}  // namespace citeinfl
