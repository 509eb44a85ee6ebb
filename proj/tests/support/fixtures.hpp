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

// Small hand-checkable models used across the test suites.

#ifndef OCCMDP_TESTS_FIXTURES_HPP_
#define OCCMDP_TESTS_FIXTURES_HPP_

#include <vector>

#include "occmdp/mdp_model.hpp"

namespace occmdp::testing {

/// One state, one action, self-loop, c0 = 5.
inline FiniteMDP single_state(double cost = 5.0) {
  return FiniteMDP("single", 1, {{0}}, {{1.0}}, {{cost}});
}

/// Deterministic 2-cycle with c0 = (0, 2).
inline FiniteMDP two_state_cycle() {
  return FiniteMDP("two_state_cycle", 2, {{0}, {0}}, {{0.0, 1.0}, {1.0, 0.0}}, {{0.0, 2.0}});
}

inline constexpr int kStay = 0;
inline constexpr int kGo = 1;
inline constexpr int kBack = 0;

/// A(0) = {stay, go}, A(1) = {back}; staying costs 3, the cycle averages 0.5.
inline FiniteMDP stay_or_go() {
  return FiniteMDP("stay_or_go", 2, {{kStay, kGo}, {kBack}},
                   {{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}, {{3.0, 0.0, 1.0}});
}

/// One state with self-loop actions a1 = 0, a2 = 1; c0 = (0, 1), c1 = (2, c1_a2).
inline FiniteMDP mixing(double c1_a2 = 0.0) {
  return FiniteMDP("mixing", 1, {{0, 1}}, {{1.0}, {1.0}}, {{0.0, 1.0}, {2.0, c1_a2}});
}

/// One state, three self-loop actions; c0 = (0, 0, 1), c1 = (5, 2, 0).
inline FiniteMDP lex_three_action() {
  return FiniteMDP("lex_three_action", 1, {{0, 1, 2}}, {{1.0}, {1.0}, {1.0}}, {{0.0, 0.0, 1.0}, {5.0, 2.0, 0.0}});
}

/// Two isolated self-loop states with costs 3 and 1.
inline FiniteMDP isolated_pair() {
  return FiniteMDP("isolated_pair", 2, {{0}, {0}}, {{1.0, 0.0}, {0.0, 1.0}}, {{3.0, 1.0}});
}

}  // namespace occmdp::testing

#endif  // OCCMDP_TESTS_FIXTURES_HPP_
