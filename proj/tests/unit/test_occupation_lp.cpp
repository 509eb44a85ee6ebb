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

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "occmdp/errors.hpp"
#include "occmdp/occupation_lp.hpp"
#include "occmdp/oracles.hpp"
#include "random_instances.hpp"

using namespace occmdp;

TEST_SUITE("occupation_lp") {

TEST_CASE("primal layout") {
  const auto one = build_primal(testing::single_state());
  CHECK(one.num_vars() == 1);
  CHECK(one.num_rows() == 2);
  CHECK(one.matrix(1, 0) == 0.0);  // balance row vanishes on a self-loop

  QueueFamilySpec spec;
  spec.truncation_level = 2;
  const auto queue = build_primal(build_queue_truncation(spec));
  CHECK(queue.num_vars() == 6);
  CHECK(queue.num_rows() == 4);
}

TEST_CASE("two-cycle balance forces the uniform measure") {
  const auto sol = solve_unconstrained(testing::two_state_cycle());
  CHECK(sol.gamma.gamma[0] == doctest::Approx(0.5));
  CHECK(sol.gamma.gamma[1] == doctest::Approx(0.5));
}

TEST_CASE("invalid model is refused") {
  const FiniteMDP bad("bad", 1, {{0}}, {{0.9}}, {{1.0}});
  CHECK_THROWS_AS(build_primal(bad), InvalidArgument);
  CHECK_THROWS_AS(solve_unconstrained(bad), InvalidArgument);
}

TEST_CASE("single state") {
  const auto sol = solve_unconstrained(testing::single_state());
  CHECK(sol.value == doctest::Approx(5.0));
  CHECK(sol.pair.dist == std::vector<double>{1.0});
  CHECK(sol.cert.rho == doctest::Approx(5.0));
  CHECK(sol.cert.h == std::vector<double>{0.0});
}

TEST_CASE("two-state cycle") {
  const auto sol = solve_unconstrained(testing::two_state_cycle());
  CHECK(std::abs(sol.value - 1.0) <= 1e-12);
  CHECK(sol.pair.dist[0] == doctest::Approx(0.5));
  CHECK(sol.pair.dist[1] == doctest::Approx(0.5));
  CHECK(sol.cert.anchor_state == 0);
  CHECK(std::abs(sol.cert.h[0]) <= 1e-12);
  CHECK(std::abs(sol.cert.h[1] - 1.0) <= 1e-12);
}

TEST_CASE("stay or go: the cycle beats staying") {
  const auto mdp = testing::stay_or_go();
  const auto sol = solve_unconstrained(mdp);
  CHECK(std::abs(sol.value - 0.5) <= 1e-12);
  CHECK(sol.pair.dist[0] == doctest::Approx(0.5));
  CHECK(sol.pair.dist[1] == doctest::Approx(0.5));
  CHECK(sol.pair.policy[0][testing::kGo] == doctest::Approx(1.0));
  CHECK(sol.pair.policy[1][0] == doctest::Approx(1.0));
  CHECK(average_cost(sol.pair, mdp, 0) == doctest::Approx(0.5));
}

TEST_CASE("decompose on and off the support") {
  const auto cycle = testing::two_state_cycle();
  const auto pair = decompose({{0.5, 0.5}}, cycle, DualCertificate{1.0, {0.0, 1.0}, 0});
  CHECK(pair.dist == std::vector<double>{0.5, 0.5});
  CHECK(pair.policy[0] == std::vector<double>{1.0});
  CHECK(pair.support == std::vector<int>{0, 1});

  // State 1 carries no mass; its policy is the h-greedy Dirac.
  // A(1) = {u = 0, v = 1}: u costs 4 and returns to 0, v costs 1 and stays.
  const FiniteMDP mdp("offsupport", 2, {{0}, {0, 1}}, {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, {{0.0, 4.0, 1.0}});
  const DualCertificate cert{0.0, {0.0, 0.5}, 0};
  const auto off = decompose({{1.0, 0.0, 0.0}}, mdp, cert);
  CHECK(off.dist[1] == 0.0);
  CHECK(off.policy[1] == std::vector<double>{0.0, 1.0});
  CHECK(off.support == std::vector<int>{0});
}

TEST_CASE("average cost and invariance on the cycle") {
  const auto mdp = testing::two_state_cycle();
  StationaryPair uniform{{{1.0}, {1.0}}, {0.5, 0.5}, {0, 1}};
  StationaryPair skewed{{{1.0}, {1.0}}, {1.0, 0.0}, {0}};
  CHECK(average_cost(uniform, mdp, 0) == 1.0);
  CHECK(invariance_residual(uniform, mdp) == 0.0);
  CHECK(invariance_residual(skewed, mdp) == 1.0);
  CHECK(average_cost(StationaryPair{{{1.0}}, {1.0}, {0}}, testing::single_state(), 0) == 5.0);
}

TEST_CASE("multichain: the cheaper isolated class wins") {
  const auto sol = solve_unconstrained(testing::isolated_pair());
  CHECK(sol.value == doctest::Approx(1.0));
  CHECK(sol.pair.dist[1] == doctest::Approx(1.0));
  CHECK(dual_min_slack(testing::isolated_pair(), sol.cert) >= -1e-9);
}

TEST_CASE("solver properties on random models") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CAPTURE(seed);
    const auto mdp = testing::random_mdp(seed);
    const auto sol = solve_unconstrained(mdp);
    CHECK(std::abs(sol.value - sol.cert.rho) <= 1e-8);
    CHECK(dual_min_slack(mdp, sol.cert) >= -1e-8);
    CHECK(invariance_residual(sol.pair, mdp) <= 1e-8);
    const auto res = occupation_residuals(mdp, sol.gamma.gamma);
    CHECK(res.normalization <= 1e-9);
    CHECK(res.balance_max <= 1e-9);
    CHECK(res.min_weight >= -1e-9);
    // decompose then reconstruct is the identity on the support.
    const auto back = reconstruct(sol.pair, mdp);
    const auto& idx = mdp.pairs();
    for (std::size_t col = 0; col < idx.size(); ++col) {
      if (sol.pair.dist[idx[col].state] > kSupportEps) CHECK(std::abs(back.gamma[col] - sol.gamma.gamma[col]) <= 1e-12);
    }
    CHECK(std::abs(sol.cert.h[sol.cert.anchor_state]) == 0.0);
    CHECK(sol.cert.anchor_state == anchor_state(sol.pair.dist));
    const auto bf = oracles::brute_force_minimum_value(mdp);
    CHECK(std::abs(sol.value - bf.value) <= 1e-6);
  }
}

TEST_CASE("queue regression values") {
  // Frozen from an independent HiGHS solve of the same occupation LP.
  constexpr double kQueueRho = 0.6994761592951964;
  for (int n : {10, 50, 100}) {
    QueueFamilySpec spec;
    spec.truncation_level = n;
    CHECK(std::abs(solve_unconstrained(build_queue_truncation(spec)).value - kQueueRho) <= 1e-9);
  }
  QueueFamilySpec two;
  two.truncation_level = 2;
  CHECK(std::abs(solve_unconstrained(build_queue_truncation(two)).value - 0.5851063829787235) <= 1e-9);
}

}  // TEST_SUITE
