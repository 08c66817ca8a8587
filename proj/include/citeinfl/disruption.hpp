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
#include <vector>

#include "citeinfl/netcore.hpp"

namespace citeinfl {

struct WindowOptions {
  Period cw = 5;
  // Count citers from the focal node's own cohort as well.
  bool include_same_cohort = false;
};

// Citation-window subgraph around a focal node. The three citer sets are
// disjoint and sorted by id.
struct FocalSubgraph {
  NodeId focal = 0;
  std::vector<NodeId> refs;
  std::vector<NodeId> citers_i;  // cite the focal node only
  std::vector<NodeId> citers_j;  // cite the focal node and at least one reference
  std::vector<NodeId> citers_k;  // cite a reference but not the focal node
  Period window = 0;
};

FocalSubgraph extract_subgraph(const CitationNetwork& net, NodeId p,
                               const WindowOptions& window);

struct CiterCounts {
  std::int64_t n_i = 0;
  std::int64_t n_j = 0;
  std::int64_t n_k = 0;
};

std::optional<double> cd_index(const CiterCounts& counts);
std::optional<double> cd_nok(std::int64_t n_i, std::int64_t n_j);
std::optional<double> rk(std::int64_t n_i, std::int64_t n_j, std::int64_t n_k);

struct DisruptionRecord {
  NodeId focal = 0;
  Period cohort = 0;
  std::int64_t n_i = 0;
  std::int64_t n_j = 0;
  std::int64_t n_k = 0;
  std::optional<double> cd;
  std::optional<double> cd_nok;
  std::optional<double> r_k;
  Period window = 0;

  bool defined() const { return cd.has_value(); }
  std::int64_t n_ij() const { return n_i + n_j; }
};

DisruptionRecord make_record(NodeId focal, Period cohort, const CiterCounts& counts,
                             Period window);

struct MeasureOptions {
  WindowOptions window;
  unsigned threads = 1;
};

// One record per node of cohorts [first, last]; records are ordered by id.
// Requires first >= 1 and last + cw <= T.
std::vector<DisruptionRecord> measure_all(const CitationNetwork& net, Period first,
                                          Period last, const MeasureOptions& options);

// Latest focal cohort whose window fits inside the network.
Period last_uncensored_cohort(const CitationNetwork& net, Period cw);

}  // namespace citeinfl
