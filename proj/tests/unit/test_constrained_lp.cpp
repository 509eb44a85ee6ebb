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
#include "occmdp/constrained_lp.hpp"
#include "occmdp/errors.hpp"
#include "occmdp/lp_core.hpp"
#include "occmdp/oracles.hpp"
#include "random_instances.hpp"

using namespace occmdp;

namespace {

double dual_value(const ConstrainedSolution& sol) {
  double v = sol.cert.rho;
  for (std::size_t i = 0; i < sol.kappa.size(); ++i) v += sol.cert.beta[i] * sol.kappa[i];
  return v;
}

/// True when a <= b lexicographically, comparing entries within tol.
bool lex_leq(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - tol) return true;
    if (a[i] > b[i] + tol) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("constrained_lp") {

TEST_CASE("builder layout and guards") {
  const auto lp = build_constrained(testing::mixing(), {1.0});
  CHECK(lp.num_vars() == 3);
  CHECK(lp.num_rows() == 3);
  CHECK_THROWS_WITH_AS(build_constrained(testing::stay_or_go(), {}), doctest::Contains("use build_primal"),
                       InvalidArgument);
  CHECK_THROWS_AS(build_constrained(testing::mixing(), {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(build_constrained(testing::mixing(), {-1.0}), InvalidArgument);
}

TEST_CASE("mixing example with a binding budget") {
  const auto sol = solve_constrained(testing::mixing(), {1.0});
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(std::abs(sol.gamma.gamma[0] - 0.5) <= 1e-12);
  CHECK(std::abs(sol.gamma.gamma[1] - 0.5) <= 1e-12);
  CHECK(std::abs(sol.value - 0.5) <= 1e-12);
  CHECK(std::abs(sol.alpha[0]) <= 1e-12);
  CHECK(std::abs(sol.cert.beta[0] + 0.5) <= 1e-12);
  CHECK(complementarity_check(sol) <= 1e-8);
  CHECK(sol.binding == std::vector<int>{0});
}

TEST_CASE("mixing example with an inactive budget") {
  const auto sol = solve_constrained(testing::mixing(), {2.0});
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.gamma.gamma[0] == doctest::Approx(1.0));
  CHECK(std::abs(sol.value) <= 1e-12);
  CHECK(std::abs(sol.alpha[0]) <= 1e-12);

  const auto loose = solve_constrained(testing::mixing(), {10.0});
  REQUIRE(loose.status == SolveStatus::kOptimal);
  CHECK(loose.alpha[0] == doctest::Approx(8.0));
  CHECK(loose.cert.beta[0] == doctest::Approx(0.0));
  CHECK(std::abs(loose.value - solve_unconstrained(testing::mixing()).value) <= 1e-12);
}

TEST_CASE("zero budget") {
  const auto only_a2 = solve_constrained(testing::mixing(0.0), {0.0});
  REQUIRE(only_a2.status == SolveStatus::kOptimal);
  CHECK(only_a2.gamma.gamma[1] == doctest::Approx(1.0));
  CHECK(only_a2.value == doctest::Approx(1.0));

  const auto none = solve_constrained(testing::mixing(1.0), {0.0});
  CHECK(none.status == SolveStatus::kInfeasible);
  CHECK(oracles::brute_force_constrained_value(testing::mixing(1.0), {0.0}).status == lp::Status::kInfeasible);
}

TEST_CASE("lexicographic three-action example") {
  const auto lex = lex_solve(testing::lex_three_action(), {5.0});
  REQUIRE(lex.status == LexStatus::kOptimal);
  REQUIRE(lex.kappa_star.size() == 2);
  CHECK(std::abs(lex.kappa_star[0]) <= 1e-8);
  CHECK(std::abs(lex.kappa_star[1] - 2.0) <= 1e-7);
  CHECK(lex.gamma.gamma[1] == doctest::Approx(1.0));
}

TEST_CASE("lex with a unique constrained optimum equals the constrained solve") {
  const auto mdp = testing::mixing();
  const auto lex = lex_solve(mdp, {1.0});
  const auto con = solve_constrained(mdp, {1.0});
  REQUIRE(lex.status == LexStatus::kOptimal);
  for (std::size_t col = 0; col < con.gamma.gamma.size(); ++col) {
    CHECK(std::abs(lex.gamma.gamma[col] - con.gamma.gamma[col]) <= 1e-7);
  }
}

TEST_CASE("lex with identical costs") {
  const FiniteMDP flat("flat", 1, {{0, 1, 2}}, {{1.0}, {1.0}, {1.0}}, {{2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}});
  const auto lex = lex_solve(flat, {3.0});
  REQUIRE(lex.status == LexStatus::kOptimal);
  CHECK(lex.kappa_star[0] == doctest::Approx(2.0));
  CHECK(lex.kappa_star[1] == doctest::Approx(1.0));
  CHECK(lex_solve(testing::mixing(1.0), {0.0}).status == LexStatus::kInfeasible);
}

TEST_CASE("constrained properties on random instances") {
  int feasible = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    const auto inst = testing::random_constrained(seed);
    const auto sol = solve_constrained(inst.mdp, inst.kappa);
    const auto oracle = oracles::brute_force_constrained_value(inst.mdp, inst.kappa);
    if (inst.drawn_feasible) CHECK(sol.status == SolveStatus::kOptimal);
    REQUIRE((sol.status == SolveStatus::kOptimal) == (oracle.status == lp::Status::kOptimal));
    if (sol.status != SolveStatus::kOptimal) continue;
    ++feasible;
    CHECK(std::abs(sol.value - dual_value(sol)) <= 1e-8);
    CHECK(complementarity_check(sol) <= 1e-8);
    CHECK(*std::max_element(sol.cert.beta.begin(), sol.cert.beta.end()) <= 1e-9);
    CHECK(constrained_dual_min_slack(inst.mdp, sol.cert) >= -1e-8);
    CHECK(std::abs(sol.value - oracle.value) <= 1e-6);
    const auto vertex = lp::enumerate_bfs_optimum(build_constrained(inst.mdp, inst.kappa));
    CHECK(std::abs(sol.value - vertex.objective_value) <= 1e-8);

    // Relaxing every budget never raises the optimum.
    std::vector<double> relaxed = inst.kappa;
    for (double& k : relaxed) k += 0.5;
    const auto wider = solve_constrained(inst.mdp, relaxed);
    REQUIRE(wider.status == SolveStatus::kOptimal);
    CHECK(wider.value <= sol.value + 1e-9);
  }
  CHECK(feasible >= 60);
}

TEST_CASE("lexicographic dominance over every feasible vertex") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CAPTURE(seed);
    const auto inst = testing::random_constrained(seed + 1000, 3, 2);
    const auto lex = lex_solve(inst.mdp, inst.kappa);
    if (lex.status == LexStatus::kInfeasible) continue;
    REQUIRE(lex.status == LexStatus::kOptimal);
    const auto lex_costs = cost_vector(inst.mdp, lex.gamma.gamma);
    const auto lp = build_constrained(inst.mdp, inst.kappa);
    for (const auto& v : lp::enumerate_feasible_vertices(lp)) {
      std::vector<double> gamma(v.data(), v.data() + inst.mdp.num_pairs());
      CHECK(lex_leq(lex_costs, cost_vector(inst.mdp, gamma), 1e-7));
    }
  }
}

}  // TEST_SUITE
