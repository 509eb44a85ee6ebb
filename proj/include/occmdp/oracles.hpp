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

// Brute-force ground truth for the LP solvers. None of this code calls the
// occupation or constrained LP builders.

#ifndef OCCMDP_ORACLES_HPP_
#define OCCMDP_ORACLES_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "occmdp/lp_core.hpp"
#include "occmdp/mdp_model.hpp"

namespace occmdp::oracles {

/// f(x) as an action id per state.
using DeterministicPolicy = std::vector<int>;

/// Recurrent structure of the chain induced by a deterministic policy.
/// Classes are ordered by their smallest state; members are ascending.
struct ChainAnalysis {
  std::vector<std::vector<int>> classes;
  std::vector<std::vector<double>> class_dists;  // aligned with classes[k]
  std::vector<std::vector<double>> class_costs;  // [k][i], i = 0..d
  std::vector<int> transient;
};

/// Throws InvalidArgument if f(x) is not admissible,
/// InternalInconsistency on a singular class system.
ChainAnalysis analyze_policy_chain(const FiniteMDP& mdp, const DeterministicPolicy& f);

/// Same, with the policy given as slots into A(x).
ChainAnalysis analyze_policy_slots(const FiniteMDP& mdp, std::span<const int> slots);

/// Strongly connected components of a directed graph given as adjacency
/// lists, each ascending, ordered by smallest member.
std::vector<std::vector<int>> strongly_connected_components(const std::vector<std::vector<int>>& adjacency);

struct PolicyLimit {
  std::uint64_t max_policies = 1'000'000;
};

struct BruteForceResult {
  double value = 0.0;
  DeterministicPolicy policy;
  std::vector<int> witness_class;
  std::uint64_t policy_index = 0;
  std::uint64_t policies = 0;
};

/// prod_x |A(x)|, saturating at UINT64_MAX.
std::uint64_t count_policies(const FiniteMDP& mdp);

/// Mixed-radix decoding with state 0 as the least significant digit.
std::vector<int> policy_slots_from_index(const FiniteMDP& mdp, std::uint64_t index);

/// Minimum class-average c0 over every deterministic policy and every
/// closed class. Ties go to the lowest policy index, then lowest class.
/// Policies are analyzed in parallel when built with OpenMP; the result
/// does not depend on the thread count.
BruteForceResult brute_force_minimum_value(const FiniteMDP& mdp, const PolicyLimit& limit = {});

/// Single-threaded reference for brute_force_minimum_value.
BruteForceResult brute_force_minimum_value_serial(const FiniteMDP& mdp, const PolicyLimit& limit = {});

struct RviOptions {
  int max_iters = 200000;
  double span_tol = 1e-11;
  double damping = 0.5;
  int anchor = 0;
};

struct RviResult {
  double rho = 0.0;
  /// Bias of the undamped model, h(anchor) = 0.
  std::vector<double> h;
  int iterations = 0;
  double final_span = 0.0;
  DeterministicPolicy greedy;
};

/// Relative value iteration on the damped kernel (1-t) q + t I.
/// Throws MultichainRefusal if the final greedy policy has more than one
/// recurrent class, NonConvergence otherwise when max_iters is reached.
RviResult relative_value_iteration(const FiniteMDP& mdp, const RviOptions& options = {});

/// Constrained program assembled row by row, in the order
/// [budgets, balance, normalization], without the production builder.
lp::StandardLP assemble_constrained_lp(const FiniteMDP& mdp, const std::vector<double>& kappa);

struct ConstrainedOracleResult {
  lp::Status status = lp::Status::kInfeasible;
  double value = 0.0;
};

/// Vertex-enumeration optimum of the constrained program.
ConstrainedOracleResult brute_force_constrained_value(const FiniteMDP& mdp, const std::vector<double>& kappa,
                                                      const lp::EnumerationGuard& guard = {});

}  // namespace occmdp::oracles

#endif  // OCCMDP_ORACLES_HPP_
