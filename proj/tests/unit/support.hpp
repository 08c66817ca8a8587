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

#include <algorithm>
#include <set>
#include <vector>

#include "citeinfl/disruption.hpp"
#include "citeinfl/netcore.hpp"
#include "citeinfl/rng.hpp"

namespace citeinfl::testing {

// Small random network: `cohorts` periods after a primordial cohort, each node
// citing up to `max_refs` distinct earlier-or-same-cohort nodes.
inline CitationNetwork random_network(std::uint64_t seed, int cohorts, int cohort_size,
                                      int max_refs) {
  CitationNetwork net;
  net.add_cohort(0, static_cast<std::size_t>(cohort_size));
  RngStream rng = RngStream::substream(seed, 0);
  for (Period t = 1; t <= cohorts; ++t) {
    const NodeRange range = net.add_cohort(t, 1 + rng.below(cohort_size));
    for (NodeId a = range.first; a < range.last; ++a) {
      std::set<NodeId> refs;
      const auto want = rng.below(static_cast<std::uint64_t>(max_refs) + 1);
      for (std::uint64_t k = 0; k < want; ++k) {
        const auto b = static_cast<NodeId>(rng.below(range.last));
        if (b != a) refs.insert(b);
      }
      const std::vector<NodeId> list(refs.begin(), refs.end());
      net.commit_references(a, list);
    }
  }
  return net;
}

inline bool cites(const CitationNetwork& net, NodeId a, NodeId b) {
  const auto refs = net.references(a);
  return std::find(refs.begin(), refs.end(), b) != refs.end();
}

// Enumerates every node as a candidate citer and every reference pair directly.
inline CiterCounts brute_force_counts(const CitationNetwork& net, NodeId p,
                                      const WindowOptions& window) {
  const Period tp = net.cohort(p);
  const Period lo = window.include_same_cohort ? tp : tp + 1;
  const Period hi = tp + window.cw;
  CiterCounts out;
  for (NodeId c = 0; c < net.num_nodes(); ++c) {
    if (c == p) continue;
    const Period tc = net.cohort(c);
    if (tc < lo || tc > hi) continue;
    const bool focal = cites(net, c, p);
    bool any_ref = false;
    for (NodeId r : net.references(p)) {
      if (cites(net, c, r)) any_ref = true;
    }
    if (focal && any_ref) {
      ++out.n_j;
    } else if (focal) {
      ++out.n_i;
    } else if (any_ref) {
      ++out.n_k;
    }
  }
  return out;
}

}  // namespace citeinfl::testing
