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
#include <span>
#include <string>
#include <vector>

#include "citeinfl/netcore.hpp"
#include "citeinfl/rng.hpp"

namespace citeinfl {

// Share of references produced by redirection in period t.
struct BetaSchedule {
  enum class Mode { kZero, kLinear400, kConstant };

  Mode mode = Mode::kZero;
  double value = 0.0;  // used by kConstant

  double at(Period t) const;
  static std::string mode_name(Mode mode);
  static Mode parse_mode(const std::string& name);
};

struct GeneratorConfig {
  GrowthSchedule schedule;
  double c_cross = 6.0;
  double alpha = 5.0;
  BetaSchedule beta;
  std::uint64_t seed = 1;

  // Throws ConfigError on any violated constraint, including beta(t) >= 1
  // for some t in [1, T].
  void validate() const;
};

// Expected redirects per direct citation: beta / (1 - beta).
double lambda_of_beta(double beta);
double beta_at(const GeneratorConfig& config, Period t);

// (c_cross + citations before t) * n(cohort)^alpha, unnormalised.
double attractiveness(const CitationNetwork& net, NodeId b, Period t,
                      const GeneratorConfig& config);

// Nodes temporarily removed from a draw, with the weights they carry in the
// index. Kept sorted by id; sized for a single reference list.
class ExclusionSet {
 public:
  void clear();
  bool contains(NodeId v) const;
  void insert(NodeId v, double weight);
  std::size_t size() const { return ids_.size(); }
  std::span<const NodeId> ids() const { return ids_; }
  // Total excluded weight over ids < bound.
  double weight_below(NodeId bound) const;

 private:
  std::vector<NodeId> ids_;
  std::vector<double> prefix_{0.0};  // prefix_[i] = weight of the first i ids
};

// Sampling weights frozen at the start of a period. Covers every node that
// exists at that time, including the cohort being generated. Weights are
// rescaled so the largest one is 1.
class AttractivenessIndex {
 public:
  static AttractivenessIndex freeze(const CitationNetwork& net, Period t,
                                    const GeneratorConfig& config);
  // Directly from weights; used by tests and toy indices.
  static AttractivenessIndex from_weights(std::vector<double> weights, Period t = 0);

  std::size_t size() const { return weights_.size(); }
  Period frozen_at() const { return frozen_at_; }
  double weight(NodeId v) const { return weights_[v]; }

  // Draws v with probability w_v / sum of non-excluded weights.
  NodeId sample(const ExclusionSet& exclude, RngStream& rng) const;

 private:
  double effective_prefix(std::size_t i, const ExclusionSet& exclude) const;

  std::vector<double> weights_;
  std::vector<double> cumulative_;  // size() + 1 entries, cumulative_[0] == 0
  Period frozen_at_ = 0;
};

NodeId sample_direct(const AttractivenessIndex& index, const ExclusionSet& exclude,
                     RngStream& rng);

// x ~ Binomial(r_b, min(lambda / r_b, 1)).
std::int64_t sample_redirect_count(std::int64_t r_b, double lambda, RngStream& rng);

// Up to x distinct members of refs_b \ exclude, drawn without replacement with
// probability proportional to index weight. Returns the whole eligible pool
// when it holds fewer than x members.
std::vector<NodeId> sample_redirect_targets(const AttractivenessIndex& index,
                                            std::span<const NodeId> refs_b,
                                            std::int64_t x, const ExclusionSet& exclude,
                                            RngStream& rng);

struct ReferenceList {
  std::vector<NodeId> refs;
  std::vector<Mechanism> mechanisms;
};

// Alternates one direct draw with a redirect batch through the direct target
// until exactly r(t) distinct references are chosen.
ReferenceList build_reference_list(const CitationNetwork& net, NodeId a, Period t,
                                   const AttractivenessIndex& index,
                                   const GeneratorConfig& config, RngStream& rng);

struct GenerateOptions {
  unsigned threads = 1;
};

CitationNetwork generate(const GeneratorConfig& config, const GenerateOptions& options = {});

}  // namespace citeinfl
