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
#include <vector>

namespace citeinfl {

using NodeId = std::uint32_t;
using Period = std::int32_t;

// Half-open id interval [first, last).
struct NodeRange {
  NodeId first = 0;
  NodeId last = 0;

  std::size_t size() const { return last - first; }
  bool empty() const { return first == last; }
  bool contains(NodeId v) const { return v >= first && v < last; }
};

// How a reference was produced by the generator.
enum class Mechanism : std::uint8_t { kDirect = 0, kRedirect = 1, kUnknown = 2 };

// Deterministic cohort-size and reference-length schedules.
//
// Cohort t >= 1 holds floor(n0 * exp(g_n * (t - offset))) nodes and each of
// them cites floor(r0 * exp(g_r * (t - offset))) earlier nodes; from
// cap_period onward the reference length is cap_value instead. The
// primordial cohort (t = 0) has floor(n0) nodes and no references.
struct GrowthSchedule {
  double n0 = 30.0;
  double g_n = 0.033;
  double r0 = 25.0;
  double g_r = 0.0;
  Period T = 150;
  std::optional<Period> cap_period;
  std::optional<std::int64_t> cap_value;
  int period_offset = 1;

  void validate() const;
};

std::int64_t schedule_n(const GrowthSchedule& sched, Period t);
std::int64_t schedule_r(const GrowthSchedule& sched, Period t);
std::int64_t primordial_size(const GrowthSchedule& sched);

// Append-only citation graph with cohort bookkeeping.
//
// Nodes are created cohort by cohort with dense, contiguous ids. Reference
// lists are committed in non-decreasing id order; the transpose (citers) is
// maintained on commit and is therefore sorted by citing id, which is also
// citing-cohort order.
class CitationNetwork {
 public:
  CitationNetwork() = default;

  NodeRange add_cohort(Period t, std::size_t size);

  // Commits the reference list of `citing`. `mechanisms` is either empty or
  // parallel to `refs`.
  void commit_references(NodeId citing, std::span<const NodeId> refs,
                         std::span<const Mechanism> mechanisms = {});

  std::size_t num_nodes() const { return cohort_of_.size(); }
  std::size_t num_edges() const { return refs_.size(); }

  // Index of the most recently added cohort, or -1 for an empty network.
  Period last_period() const {
    return cohort_begin_.empty() ? -1 : static_cast<Period>(cohort_begin_.size()) - 2;
  }
  std::size_t num_cohorts() const { return cohort_begin_.empty() ? 0 : cohort_begin_.size() - 1; }

  bool contains(NodeId v) const { return v < num_nodes(); }
  Period cohort(NodeId v) const;
  NodeRange cohort_nodes(Period t) const;
  std::size_t cohort_size(Period t) const { return cohort_nodes(t).size(); }

  std::span<const NodeId> references(NodeId v) const;
  std::span<const Mechanism> reference_mechanisms(NodeId v) const;
  // Citing nodes, ascending by id.
  std::span<const NodeId> citers(NodeId v) const;
  // Citing nodes whose cohort lies in [first, last].
  std::span<const NodeId> citers_in_cohorts(NodeId v, Period first, Period last) const;

  std::size_t total_citations(NodeId v) const { return citers(v).size(); }
  // Citations received from citing cohorts <= t - 1.
  std::size_t citations_before(NodeId v, Period t) const;

  // Nodes [0, committed_until()) have final reference lists.
  NodeId committed_until() const { return committed_until_; }

  // Structural equality: same cohorts and identical ordered reference lists.
  friend bool operator==(const CitationNetwork& a, const CitationNetwork& b) {
    return a.cohort_begin_ == b.cohort_begin_ && a.ref_offsets_ == b.ref_offsets_ &&
           a.refs_ == b.refs_;
  }

 private:
  void check_node(NodeId v) const;
  // First id of cohort t, clamped to [0, num_nodes].
  NodeId cohort_first_id(Period t) const;

  std::vector<Period> cohort_of_;
  std::vector<NodeId> cohort_begin_;  // size num_cohorts + 1
  std::vector<std::size_t> ref_offsets_{0};  // size committed_until_ + 1
  std::vector<NodeId> refs_;
  std::vector<Mechanism> mechanisms_;
  std::vector<std::vector<NodeId>> citers_;
  NodeId committed_until_ = 0;
};

}  // namespace citeinfl
