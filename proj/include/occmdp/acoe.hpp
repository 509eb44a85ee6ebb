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

#ifndef OCCMDP_ACOE_HPP_
#define OCCMDP_ACOE_HPP_

#include <span>
#include <vector>

#include "occmdp/constrained_lp.hpp"
#include "occmdp/mdp_model.hpp"
#include "occmdp/occupation_lp.hpp"

namespace occmdp {

struct AcoeTolerances {
  double inequality = 1e-8;   // min slack must be >= -inequality
  double equality = 1e-7;     // |slack| <= equality marks an equality state
  double randomized = 1e-7;   // mu-averaged form on the support
  double support_eps = kSupportEps;
  double absorbing_mass = 1e-10;
};

struct AcoeStateRow {
  int state = 0;
  double p = 0.0;
  double h = 0.0;
  /// min_a {c(x,a) + sum_y h(y) q(y|x,a)} - level - h(x).
  double slack = 0.0;
  int argmin_action = 0;
  /// sum_a mu(a|x) {c + sum h q} - level - h(x).
  double randomized_slack = 0.0;
  bool equality = false;
};

/// Optimality-equation check of a dual certificate against a solved pair.
struct AcoeReport {
  double level = 0.0;
  bool inequality_ok = false;
  double min_slack = 0.0;
  std::vector<int> equality_states;
  bool support_covered = false;
  /// Largest |randomized_slack| over the support.
  double randomized_max_dev = 0.0;
  bool randomized_ok = false;
  std::vector<AcoeStateRow> per_state;
  /// c(x,a) + sum h q - level - h(x) for every pair column.
  std::vector<double> pair_slack;
};

/// Generic form: level + h(x) vs min_a {cost(x,a) + sum_y h(y) q(y|x,a)}.
AcoeReport acoe_check(const FiniteMDP& mdp, std::span<const double> cost, double level,
                      std::span<const double> h, const StationaryPair& pair, const AcoeTolerances& tols = {});

AcoeReport acoe_residuals(const FiniteMDP& mdp, const DualCertificate& cert, const StationaryPair& pair,
                          std::span<const double> cost, const AcoeTolerances& tols = {});

/// Uses c* = c0 - sum_i beta_i c_i and the level value - sum_i beta_i kappa_i.
AcoeReport constrained_acoe_residuals(const FiniteMDP& mdp, const ConstrainedDual& cdual,
                                      const StationaryPair& pair, const std::vector<double>& kappa,
                                      double value, const AcoeTolerances& tols = {});

/// Deterministic greedy policy with the largest set of equality states
/// that it keeps closed.
struct GreedyPolicy {
  std::vector<int> action;
  std::vector<int> slot;
  std::vector<int> absorbing_set;

  /// False when the absorbing set came out empty.
  bool ok() const { return !absorbing_set.empty(); }
  bool in_absorbing_set(int x) const;
};

/// f(x) = argmin_a {cost(x,a) + sum_y h(y) q(y|x,a)} (lowest action on
/// ties). The absorbing set is pruned from report.equality_states until
/// every member has a tight action sending all but absorbing_mass of its
/// probability inside; members use the lowest such action.
GreedyPolicy extract_greedy_policy(const FiniteMDP& mdp, std::span<const double> cost, std::span<const double> h,
                                   const AcoeReport& report, const AcoeTolerances& tols = {});

GreedyPolicy extract_greedy_policy(const FiniteMDP& mdp, const DualCertificate& cert, const StationaryPair& pair,
                                   std::span<const double> cost, const AcoeTolerances& tols = {});

}  // namespace occmdp

#endif  // OCCMDP_ACOE_HPP_
