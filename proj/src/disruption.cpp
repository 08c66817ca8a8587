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

#include "citeinfl/disruption.hpp"

#include <algorithm>
#include <string>

#include "citeinfl/errors.hpp"
#include "citeinfl/parallel.hpp"

namespace citeinfl {
namespace {

void check_window(const CitationNetwork& net, Period cohort, Period cw) {
  if (cw < 1) throw CensoringError("citation window must be >= 1");
  if (cohort + cw > net.last_period()) {
    throw CensoringError("window of cohort " + std::to_string(cohort) + " with CW=" +
                         std::to_string(cw) + " extends past T=" +
                         std::to_string(net.last_period()));
  }
}

// Per-worker scratch marks, reused across focal nodes.
class CiterMarks {
 public:
  explicit CiterMarks(std::size_t n) : marks_(n, 0) {}

  CiterCounts count(const CitationNetwork& net, NodeId p, const WindowOptions& window) {
    const Period tp = net.cohort(p);
    const Period first = window.include_same_cohort ? tp : tp + 1;
    const Period last = tp + window.cw;
    epoch_ += 2;
    const std::uint64_t cites_focal = epoch_;
    const std::uint64_t counted = epoch_ + 1;

    CiterCounts counts;
    std::int64_t focal_citers = 0;
    for (NodeId c : net.citers_in_cohorts(p, first, last)) {
      marks_[c] = cites_focal;
      ++focal_citers;
    }
    for (NodeId r : net.references(p)) {
      for (NodeId c : net.citers_in_cohorts(r, first, last)) {
        if (c == p) continue;
        std::uint64_t& m = marks_[c];
        if (m == counted) continue;
        if (m == cites_focal) {
          ++counts.n_j;
        } else {
          ++counts.n_k;
        }
        m = counted;
      }
    }
    counts.n_i = focal_citers - counts.n_j;
    return counts;
  }

 private:
  std::vector<std::uint64_t> marks_;
  std::uint64_t epoch_ = 0;
};

}  // namespace

FocalSubgraph extract_subgraph(const CitationNetwork& net, NodeId p,
                               const WindowOptions& window) {
  const Period tp = net.cohort(p);
  check_window(net, tp, window.cw);
  const Period first = window.include_same_cohort ? tp : tp + 1;
  const Period last = tp + window.cw;

  FocalSubgraph g;
  g.focal = p;
  g.window = window.cw;
  g.refs.assign(net.references(p).begin(), net.references(p).end());
  std::sort(g.refs.begin(), g.refs.end());

  const auto focal_citers = net.citers_in_cohorts(p, first, last);
  std::vector<NodeId> ref_citers;
  for (NodeId r : g.refs) {
    for (NodeId c : net.citers_in_cohorts(r, first, last)) {
      if (c != p) ref_citers.push_back(c);
    }
  }
  std::sort(ref_citers.begin(), ref_citers.end());
  ref_citers.erase(std::unique(ref_citers.begin(), ref_citers.end()), ref_citers.end());

  std::set_difference(focal_citers.begin(), focal_citers.end(), ref_citers.begin(),
                      ref_citers.end(), std::back_inserter(g.citers_i));
  std::set_intersection(focal_citers.begin(), focal_citers.end(), ref_citers.begin(),
                        ref_citers.end(), std::back_inserter(g.citers_j));
  std::set_difference(ref_citers.begin(), ref_citers.end(), focal_citers.begin(),
                      focal_citers.end(), std::back_inserter(g.citers_k));
  return g;
}

std::optional<double> cd_index(const CiterCounts& c) {
  const std::int64_t denom = c.n_i + c.n_j + c.n_k;
  if (denom <= 0) return std::nullopt;
  return static_cast<double>(c.n_i - c.n_j) / static_cast<double>(denom);
}

std::optional<double> cd_nok(std::int64_t n_i, std::int64_t n_j) {
  const std::int64_t denom = n_i + n_j;
  if (denom <= 0) return std::nullopt;
  return static_cast<double>(n_i - n_j) / static_cast<double>(denom);
}

std::optional<double> rk(std::int64_t n_i, std::int64_t n_j, std::int64_t n_k) {
  const std::int64_t denom = n_i + n_j;
  if (denom <= 0) return std::nullopt;
  return static_cast<double>(n_k) / static_cast<double>(denom);
}

DisruptionRecord make_record(NodeId focal, Period cohort, const CiterCounts& counts,
                             Period window) {
  DisruptionRecord rec;
  rec.focal = focal;
  rec.cohort = cohort;
  rec.n_i = counts.n_i;
  rec.n_j = counts.n_j;
  rec.n_k = counts.n_k;
  rec.cd = cd_index(counts);
  rec.cd_nok = cd_nok(counts.n_i, counts.n_j);
  rec.r_k = rk(counts.n_i, counts.n_j, counts.n_k);
  rec.window = window;
  return rec;
}

Period last_uncensored_cohort(const CitationNetwork& net, Period cw) {
  return net.last_period() - cw;
}

std::vector<DisruptionRecord> measure_all(const CitationNetwork& net, Period first,
                                          Period last, const MeasureOptions& options) {
  if (first > last) return {};
  if (first < 1) throw CensoringError("focal cohorts start at 1");
  check_window(net, last, options.window.cw);

  const NodeRange focal{net.cohort_nodes(first).first, net.cohort_nodes(last).last};
  std::vector<DisruptionRecord> records(focal.size());
  const unsigned threads = resolve_threads(options.threads);
  std::vector<CiterMarks> marks;
  marks.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) marks.emplace_back(net.num_nodes());

  parallel_for(focal.size(), threads, [&](std::size_t i, unsigned worker) {
    const NodeId p = focal.first + static_cast<NodeId>(i);
    const CiterCounts counts = marks[worker].count(net, p, options.window);
    records[i] = make_record(p, net.cohort(p), counts, options.window.cw);
  });
  return records;
}

}  // namespace citeinfl
