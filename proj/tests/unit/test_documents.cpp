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

#include "fixtures.hpp"
#include "occmdp/documents.hpp"
#include "occmdp/errors.hpp"
#include "random_instances.hpp"

using namespace occmdp;
using doc::json;

namespace {

json solved(const FiniteMDP& mdp) {
  const auto sol = solve_unconstrained(mdp);
  const auto acoe = acoe_residuals(mdp, sol.cert, sol.pair, mdp.cost(0));
  const auto greedy = extract_greedy_policy(mdp, sol.cert, sol.pair, mdp.cost(0));
  return doc::solution_to_json(mdp, sol, acoe, greedy);
}

json solved_constrained(const FiniteMDP& mdp, const std::vector<double>& kappa) {
  const auto sol = solve_constrained(mdp, kappa);
  if (sol.status != SolveStatus::kOptimal) return doc::constrained_to_json(mdp, sol, nullptr, nullptr);
  const auto acoe = constrained_acoe_residuals(mdp, sol.cert, sol.pair, kappa, sol.value);
  const auto greedy = extract_greedy_policy(mdp, adjusted_cost(mdp, sol.cert.beta), sol.cert.h, acoe);
  return doc::constrained_to_json(mdp, sol, &acoe, &greedy);
}

const doc::Check* find_check(const doc::VerifyReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_SUITE("documents") {

TEST_CASE("format_double round-trips") {
  CHECK(doc::format_double(0.1) == "0.1");
  CHECK(doc::format_double(1.0) == "1");
  CHECK(std::stod(doc::format_double(0.6994761592951964)) == 0.6994761592951964);
}

TEST_CASE("unconstrained document layout") {
  const json d = solved(testing::two_state_cycle());
  CHECK(d.at("kind") == "unconstrained");
  CHECK(d.at("value").get<double>() == doctest::Approx(1.0));
  CHECK(d.at("gamma").size() == 2);
  CHECK(d.at("gamma")[0].at("weight").get<double>() == doctest::Approx(0.5));
  for (const char* key : {"normalization", "balance_max", "dual_feas_min_slack", "gap", "invariance"}) {
    CHECK(d.at("residuals").contains(key));
  }
  CHECK(d.at("acoe").at("per_state").size() == 2);
}

TEST_CASE("ACOE CSV") {
  const auto mdp = testing::two_state_cycle();
  const auto sol = solve_unconstrained(mdp);
  const auto acoe = acoe_residuals(mdp, sol.cert, sol.pair, mdp.cost(0));
  const auto greedy = extract_greedy_policy(mdp, sol.cert, sol.pair, mdp.cost(0));
  CHECK(doc::acoe_csv(acoe, greedy) ==
        "state,p,h,slack,argmin_action,in_absorbing_set\n0,0.5,0,0,0,1\n1,0.5,1,0,0,1\n");
}

TEST_CASE("solver output always verifies") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CAPTURE(seed);
    const auto mdp = testing::random_mdp(seed);
    CHECK(doc::verify_solution(mdp, solved(mdp)).ok());
    const auto inst = testing::random_constrained(seed);
    const json c = solved_constrained(inst.mdp, inst.kappa);
    if (c.at("status") == "optimal") CHECK(doc::verify_solution(inst.mdp, c).ok());
    const auto lex = lex_solve(inst.mdp, inst.kappa);
    if (lex.status == LexStatus::kOptimal) CHECK(doc::verify_solution(inst.mdp, doc::lex_to_json(inst.mdp, lex)).ok());
  }
}

TEST_CASE("documents survive a text round trip") {
  const auto mdp = build_queue_truncation({});
  const json d = solved(mdp);
  CHECK(doc::verify_solution(mdp, json::parse(d.dump(2))).ok());
}

TEST_CASE("tampered gamma names the balance row") {
  const auto mdp = testing::stay_or_go();
  json d = solved(mdp);
  d["gamma"][2]["weight"] = d["gamma"][2]["weight"].get<double>() + 1e-3;
  const auto report = doc::verify_solution(mdp, d);
  CHECK_FALSE(report.ok());
  const auto* balance = find_check(report, "balance");
  REQUIRE(balance != nullptr);
  CHECK_FALSE(balance->ok);
  CHECK(balance->detail.find("balance row") != std::string::npos);
}

TEST_CASE("tampered certificate fails dual feasibility") {
  const auto mdp = testing::stay_or_go();
  json d = solved(mdp);
  d["h"][1] = d["h"][1].get<double>() + 0.25;
  const auto report = doc::verify_solution(mdp, d);
  CHECK_FALSE(report.ok());
  CHECK_FALSE(find_check(report, "dual_feasibility")->ok);
}

TEST_CASE("tampered multiplier fails the constrained checks") {
  const auto mdp = testing::mixing();
  json d = solved_constrained(mdp, {1.0});
  CHECK(doc::verify_solution(mdp, d).ok());
  d["beta"][0] = 0.5;
  const auto report = doc::verify_solution(mdp, d);
  CHECK_FALSE(report.ok());
  CHECK_FALSE(find_check(report, "multiplier_sign")->ok);
}

TEST_CASE("tampered lex values fail the pins") {
  const auto mdp = testing::lex_three_action();
  const auto lex = lex_solve(mdp, {5.0});
  json d = doc::lex_to_json(mdp, lex);
  CHECK(doc::verify_solution(mdp, d).ok());
  d["lex_values"][1] = 1.0;
  CHECK_FALSE(find_check(doc::verify_solution(mdp, d), "lex_pins")->ok);
}

TEST_CASE("mismatched documents are rejected") {
  const json d = solved(testing::stay_or_go());
  CHECK_THROWS_AS(doc::verify_solution(testing::single_state(), d), SemanticError);
  json missing = d;
  missing.erase("p");
  CHECK_THROWS_AS(doc::verify_solution(testing::stay_or_go(), missing), ParseError);
  const json infeasible = solved_constrained(testing::mixing(1.0), {0.0});
  CHECK(infeasible.at("status") == "infeasible");
  CHECK_THROWS_AS(doc::parse_solution(infeasible, testing::mixing(1.0)), SemanticError);
}

TEST_CASE("documents are byte-identical across runs") {
  const auto mdp = build_queue_truncation({});
  CHECK(solved(mdp).dump(2) == solved(mdp).dump(2));
  const auto inst = testing::random_constrained(3);
  CHECK(solved_constrained(inst.mdp, inst.kappa).dump(2) == solved_constrained(inst.mdp, inst.kappa).dump(2));
}

}  // TEST_SUITE
