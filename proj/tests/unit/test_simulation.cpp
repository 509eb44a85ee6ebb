// Copyright 2026 The occmdp Authors
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
#include <sstream>

#include "fixtures.hpp"
#include "occmdp/constrained_lp.hpp"
#include "occmdp/errors.hpp"
#include "occmdp/occupation_lp.hpp"
#include "occmdp/simulation.hpp"

using namespace occmdp;

namespace {

bool within_band(const SimResult& sim, const std::vector<double>& expected, std::size_t i) {
  const double band = std::max(3.0 * sim.stderr_est[i], 0.01 * (1.0 + std::abs(expected[i])));
  return std::abs(sim.pathwise_avg[i] - expected[i]) <= band;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("counter generator reference values") {
  // First outputs of SplitMix64 seeded with 0.
  const CounterRng rng(0);
  CHECK(rng.bits(0) == 0xE220A8397B1DCDAFULL);
  CHECK(rng.bits(1) == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.uniform(0) >= 0.0);
  CHECK(rng.uniform(0) < 1.0);
}

TEST_CASE("inverse CDF sampling") {
  const std::vector<double> p = {0.25, 0.0, 0.75};
  CHECK(sample_inverse_cdf(p, 0.0) == 0);
  CHECK(sample_inverse_cdf(p, 0.2499) == 0);
  CHECK(sample_inverse_cdf(p, 0.25) == 2);
  CHECK(sample_inverse_cdf(p, 0.9999999999999999) == 2);
  const std::vector<double> tail = {0.5, 0.5, 0.0};
  CHECK(sample_inverse_cdf(tail, 0.9999999999999999) == 1);
}

TEST_CASE("single state is exact") {
  const StationaryPair pair{{{1.0}}, {1.0}, {0}};
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    SimOptions opts;
    opts.steps = 1000;
    opts.seed = seed;
    const auto sim = simulate(testing::single_state(), pair, opts);
    CHECK(sim.pathwise_avg == std::vector<double>{5.0});
  }
}

TEST_CASE("two-state cycle over an even horizon is exact") {
  const StationaryPair pair{{{1.0}, {1.0}}, {0.5, 0.5}, {0, 1}};
  SimOptions opts;
  opts.steps = 1000;
  opts.seed = 3;
  CHECK(simulate(testing::two_state_cycle(), pair, opts).pathwise_avg[0] == 1.0);
}

TEST_CASE("errors") {
  const StationaryPair pair{{{1.0}}, {1.0}, {0}};
  SimOptions opts;
  CHECK_THROWS_AS(simulate(testing::single_state(), pair, opts), InvalidArgument);
  opts.steps = 10;
  const StationaryPair empty{{{1.0}}, {0.0}, {}};
  CHECK_THROWS_AS(simulate(testing::single_state(), empty, opts), InvalidArgument);
}

TEST_CASE("reproducible and seed sensitive") {
  const auto sol = solve_unconstrained(build_queue_truncation({}));
  SimOptions opts;
  opts.steps = 20000;
  opts.seed = 11;
  const auto a = simulate(build_queue_truncation({}), sol.pair, opts);
  const auto b = simulate(build_queue_truncation({}), sol.pair, opts);
  CHECK(a.pathwise_avg == b.pathwise_avg);
  CHECK(a.stderr_est == b.stderr_est);
  CHECK(a.generator == "splitmix64-counter");
  opts.seed = 12;
  CHECK(simulate(build_queue_truncation({}), sol.pair, opts).pathwise_avg != a.pathwise_avg);
}

TEST_CASE("trace and burn-in") {
  const StationaryPair pair{{{1.0}, {1.0}}, {0.5, 0.5}, {0, 1}};
  std::ostringstream trace;
  SimOptions opts;
  opts.steps = 4;
  opts.burn_in = 3;
  opts.start_state = 0;
  opts.trace = &trace;
  const auto sim = simulate(testing::two_state_cycle(), pair, opts);
  CHECK(sim.burn_in == 3);
  // After three steps from state 0 the walk is at state 1: costs 2,0,2,0.
  CHECK(sim.pathwise_avg[0] == 1.0);
  std::string header;
  std::istringstream lines(trace.str());
  std::getline(lines, header);
  CHECK(header == "step,state,action,c0");
}

TEST_CASE("queue pathwise consistency") {
  const auto mdp = build_queue_truncation({});
  const auto sol = solve_unconstrained(mdp);
  SimOptions opts;
  opts.steps = 1'000'000;
  opts.seed = 2024;
  const auto sim = simulate(mdp, sol.pair, opts);
  const std::vector<double> expected = {average_cost(sol.pair, mdp, 0), average_cost(sol.pair, mdp, 1)};
  CHECK(within_band(sim, expected, 0));
  CHECK(within_band(sim, expected, 1));
  CHECK(sim.batches == 100);
}

TEST_CASE("constrained pair respects its budget in sample") {
  const auto mdp = build_queue_truncation({});
  const std::vector<double> kappa = {0.0002};
  const auto sol = solve_constrained(mdp, kappa);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  SimOptions opts;
  opts.steps = 1'000'000;
  opts.seed = 5;
  const auto sim = simulate(mdp, sol.pair, opts);
  const double band = std::max(3.0 * sim.stderr_est[1], 0.01 * (1.0 + kappa[0]));
  CHECK(sim.pathwise_avg[1] <= kappa[0] + band);
}

}  // TEST_SUITE
