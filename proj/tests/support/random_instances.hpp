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

// Seeded random instance families for property and acceptance tests.

#ifndef OCCMDP_TESTS_RANDOM_INSTANCES_HPP_
#define OCCMDP_TESTS_RANDOM_INSTANCES_HPP_

#include <cstdint>
#include <vector>

#include "occmdp/lp_core.hpp"
#include "occmdp/mdp_model.hpp"

namespace occmdp::testing {

struct RandomMdpShape {
  int max_states = 6;
  int max_actions = 3;
  int num_constraints = 0;
  double max_cost = 10.0;
  /// Probability that the states are split into isolated blocks.
  double multichain_prob = 0.3;
};

/// Sparse random kernel (1 to 3 successors per pair), costs U(0, max_cost),
/// action ids drawn from 0..5 so A(x) is not always 0..k-1.
FiniteMDP random_mdp(std::uint64_t seed, const RandomMdpShape& shape = {});

/// Every pair sends mass >= 0.1 to state 0, so every policy is unichain
/// and aperiodic.
FiniteMDP random_unichain_mdp(std::uint64_t seed, int max_states = 6, int max_actions = 3);

struct ConstrainedInstance {
  FiniteMDP mdp;
  std::vector<double> kappa;
  /// True when kappa was drawn from an achievable policy cost.
  bool drawn_feasible = false;
};

/// n <= max_states, d in {1, .., max_constraints}. With probability 0.8
/// kappa is a random policy's class cost plus U(0, 2); otherwise kappa is
/// half the smallest constraint cost, which no measure can meet.
ConstrainedInstance random_constrained(std::uint64_t seed, int max_states = 4, int max_constraints = 2);

/// Random standard-form LP with n <= max_vars, m <= max_rows. Some draws
/// are infeasible or unbounded.
lp::StandardLP random_lp(std::uint64_t seed, int max_vars = 10, int max_rows = 6);

}  // namespace occmdp::testing

#endif  // OCCMDP_TESTS_RANDOM_INSTANCES_HPP_
