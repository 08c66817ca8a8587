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


#include <doctest.h>

#include <cmath>
#include <set>

#include "citeinfl/errors.hpp"
#include "citeinfl/generator.hpp"
#include "citeinfl/scenario.hpp"

using namespace citeinfl;

namespace {

GeneratorConfig small_config(Period T, BetaSchedule beta, std::uint64_t seed = 5) {
  GeneratorConfig c;
  c.schedule.T = T;
  c.beta = beta;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("lambda_of_beta") {
  CHECK(lambda_of_beta(0.0) == 0.0);
  CHECK(lambda_of_beta(0.2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(lambda_of_beta(0.375) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(lambda_of_beta(1.0), DomainError);
  CHECK_THROWS_AS(lambda_of_beta(-0.1), DomainError);
}

TEST_CASE("beta schedules and validation") {
  GeneratorConfig c = small_config(150, {BetaSchedule::Mode::kLinear400});
  CHECK(beta_at(c, 150) == 0.375);
  CHECK(beta_at(small_config(150, {}), 77) == 0.0);
  CHECK_NOTHROW(c.validate());

  c.schedule.T = 400;
  CHECK_THROWS_AS(c.validate(), ConfigError);

  GeneratorConfig one = small_config(10, {BetaSchedule::Mode::kConstant, 1.0});
  CHECK_THROWS_AS(one.validate(), ConfigError);
  CHECK_THROWS_AS(BetaSchedule::parse_mode("quadratic"), ConfigError);
}

TEST_CASE("attractiveness weight") {
  CitationNetwork net;
  net.add_cohort(0, 30);
  GeneratorConfig c;
  CHECK(attractiveness(net, 3, 1, c) == doctest::Approx(6.0 * std::pow(30.0, 5)));

  const NodeRange c1 = net.add_cohort(1, 4);
  const std::vector<NodeId> ref{3};
  for (NodeId a = c1.first; a < c1.last; ++a) net.commit_references(a, ref);
  CHECK(attractiveness(net, 3, 2, c) == doctest::Approx(10.0 * std::pow(30.0, 5)));
  CHECK(attractiveness(net, 3, 1, c) == doctest::Approx(6.0 * std::pow(30.0, 5)));
}

TEST_CASE("crowding ratio between adjacent cohorts") {
  CitationNetwork net;
  net.add_cohort(0, 2);
  net.add_cohort(1, 3);
  GeneratorConfig c;
  const double ratio = attractiveness(net, 0, 1, c) / attractiveness(net, 2, 1, c);
  CHECK(ratio == doctest::Approx(std::pow(2.0 / 3.0, 5.0)).epsilon(1e-12));

  // Sampled frequencies of a two-node index built from the same weights.
  const auto index = AttractivenessIndex::from_weights({ratio, 1.0});
  RngStream rng = RngStream::substream(99, 0);
  ExclusionSet none;
  const int draws = 200000;
  int first = 0;
  for (int i = 0; i < draws; ++i) first += sample_direct(index, none, rng) == 0 ? 1 : 0;
  const double p = ratio / (1.0 + ratio);
  const double e0 = draws * p, e1 = draws * (1 - p);
  const double chi2 =
      (first - e0) * (first - e0) / e0 + (draws - first - e1) * (draws - first - e1) / e1;
  CHECK(chi2 < 6.635);
}

TEST_CASE("sample_direct") {
  RngStream rng = RngStream::substream(1, 1);
  ExclusionSet none;
  const auto single = AttractivenessIndex::from_weights({4.2});
  for (int i = 0; i < 100; ++i) CHECK(sample_direct(single, none, rng) == 0);

  // Weights 3w and w: chi-square with one degree of freedom, p > 0.01.
  const auto two = AttractivenessIndex::from_weights({3.0, 1.0});
  const int draws = 100000;
  int zeros = 0;
  for (int i = 0; i < draws; ++i) zeros += sample_direct(two, none, rng) == 0 ? 1 : 0;
  const double e0 = 0.75 * draws, e1 = 0.25 * draws;
  const double chi2 =
      (zeros - e0) * (zeros - e0) / e0 + (draws - zeros - e1) * (draws - zeros - e1) / e1;
  CHECK(chi2 < 6.635);

  const auto many = AttractivenessIndex::from_weights({1, 5, 2, 8, 1, 3});
  ExclusionSet ex;
  ex.insert(3, 8);
  ex.insert(1, 5);
  for (int i = 0; i < draws; ++i) {
    const NodeId v = sample_direct(many, ex, rng);
    REQUIRE(v != 3);
    REQUIRE(v != 1);
  }
  for (NodeId v : {0u, 2u, 4u, 5u}) ex.insert(v, 1);
  CHECK_THROWS_AS(sample_direct(many, ex, rng), ExhaustionError);
}

TEST_CASE("sample_redirect_count") {
  RngStream rng = RngStream::substream(2, 0);
  CHECK(sample_redirect_count(0, 0.6, rng) == 0);
  CHECK(sample_redirect_count(25, 0.0, rng) == 0);
  const int draws = 1000000;
  double sum = 0;
  for (int i = 0; i < draws; ++i) {
    const auto x = sample_redirect_count(25, 0.6, rng);
    REQUIRE(x >= 0);
    REQUIRE(x <= 25);
    sum += static_cast<double>(x);
  }
  CHECK(std::abs(sum / draws - 0.6) < 0.01);
  CHECK(sample_redirect_count(3, 7.0, rng) == 3);
}

TEST_CASE("sample_redirect_targets") {
  RngStream rng = RngStream::substream(3, 0);
  ExclusionSet none;
  const auto index = AttractivenessIndex::from_weights({9.0, 1.0, 2.0, 4.0});
  const std::vector<NodeId> refs{0, 1, 2};
  const auto all = sample_redirect_targets(index, refs, 3, none, rng);
  CHECK(std::set<NodeId>(all.begin(), all.end()) == std::set<NodeId>{0, 1, 2});
  CHECK(sample_redirect_targets(index, refs, 0, none, rng).empty());

  ExclusionSet ex;
  ex.insert(2, 2.0);
  CHECK(sample_redirect_targets(index, refs, 3, ex, rng) == std::vector<NodeId>{0, 1});

  const std::vector<NodeId> pair{0, 1};
  const int trials = 100000;
  int first = 0;
  for (int i = 0; i < trials; ++i) {
    first += sample_redirect_targets(index, pair, 1, none, rng).front() == 0 ? 1 : 0;
  }
  CHECK(std::abs(static_cast<double>(first) / trials - 0.9) < 0.005);
}

TEST_CASE("build_reference_list lengths and mechanisms") {
  GeneratorConfig c = small_config(6, {BetaSchedule::Mode::kZero});
  const CitationNetwork net = generate(c);
  for (NodeId a = net.cohort_nodes(1).first; a < net.num_nodes(); ++a) {
    const auto refs = net.references(a);
    REQUIRE(refs.size() == 25);
    for (Mechanism m : net.reference_mechanisms(a)) REQUIRE(m == Mechanism::kDirect);
    std::set<NodeId> uniq(refs.begin(), refs.end());
    REQUIRE(uniq.size() == refs.size());
    for (NodeId b : refs) REQUIRE(net.cohort(b) <= net.cohort(a));
  }

  GeneratorConfig r1 = small_config(5, {BetaSchedule::Mode::kConstant, 0.9});
  r1.schedule.r0 = 1;
  const CitationNetwork single = generate(r1);
  for (NodeId a = single.cohort_nodes(1).first; a < single.num_nodes(); ++a) {
    REQUIRE(single.references(a).size() == 1);
    REQUIRE(single.reference_mechanisms(a)[0] == Mechanism::kDirect);
  }
}

TEST_CASE("generate: closed-form counts for a short scenario-1 run") {
  RunConfig rc = scenario_spec(1).config;
  rc.generator.schedule.T = 5;
  const CitationNetwork net = generate(rc.generator);
  std::size_t expect = 30;
  for (Period t = 1; t <= 5; ++t) {
    expect += static_cast<std::size_t>(std::floor(30.0 * std::exp(0.033 * (t - 1))));
  }
  CHECK(net.num_nodes() == expect);
  CHECK(net.num_edges() == 25 * (expect - 30));
  for (Period t = 1; t <= 5; ++t) {
    for (NodeId a = net.cohort_nodes(t).first; a < net.cohort_nodes(t).last; ++a) {
      REQUIRE(net.references(a).size() == static_cast<std::size_t>(schedule_r(rc.generator.schedule, t)));
    }
  }
}

TEST_CASE("generate: determinism and thread independence") {
  GeneratorConfig c = small_config(25, {BetaSchedule::Mode::kLinear400}, 41);
  const CitationNetwork a = generate(c, {.threads = 1});
  const CitationNetwork b = generate(c, {.threads = 1});
  const CitationNetwork d = generate(c, {.threads = 3});
  CHECK(a == b);
  CHECK(a == d);
  c.seed = 42;
  CHECK_FALSE(a == generate(c));
}

TEST_CASE("replaying a period from its frozen weights reproduces the draws") {
  GeneratorConfig c = small_config(20, {BetaSchedule::Mode::kConstant, 0.3}, 8);
  const CitationNetwork net = generate(c);
  for (Period t : {1, 7, 20}) {
    const auto index = AttractivenessIndex::freeze(net, t, c);
    const NodeRange cohort = net.cohort_nodes(t);
    for (NodeId a = cohort.first; a < cohort.last; ++a) {
      RngStream rng = RngStream::substream(c.seed, a);
      const ReferenceList list = build_reference_list(net, a, t, index, c, rng);
      const auto refs = net.references(a);
      REQUIRE(std::equal(list.refs.begin(), list.refs.end(), refs.begin(), refs.end()));
    }
  }
}

TEST_CASE("redirect share tracks beta(t) over a scenario-3 run") {
  const RunConfig rc = scenario_spec(3).config;
  const CitationNetwork net = generate(rc.generator);
  int checked = 0;
  double worst = 0;
  for (Period t = 1; t <= rc.generator.schedule.T; ++t) {
    const NodeRange cohort = net.cohort_nodes(t);
    const double volume = static_cast<double>(cohort.size()) *
                          static_cast<double>(schedule_r(rc.generator.schedule, t));
    if (volume <= 1e4) continue;
    std::size_t redirected = 0, total = 0;
    for (NodeId a = cohort.first; a < cohort.last; ++a) {
      for (Mechanism m : net.reference_mechanisms(a)) {
        redirected += m == Mechanism::kRedirect ? 1 : 0;
        ++total;
      }
    }
    const double share = static_cast<double>(redirected) / static_cast<double>(total);
    worst = std::max(worst, std::abs(share - beta_at(rc.generator, t)));
    ++checked;
  }
  MESSAGE("periods checked: " << checked << ", worst deviation: " << worst);
  CHECK(checked > 50);
  CHECK(worst <= 0.03);
}
