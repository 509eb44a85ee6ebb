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

#ifndef OCCMDP_OCCUPATION_LP_HPP_
#define OCCMDP_OCCUPATION_LP_HPP_

#include <iosfwd>
#include <span>
#include <vector>

#include "occmdp/lp_core.hpp"
#include "occmdp/mdp_model.hpp"

namespace occmdp {

/// States with p(x) above this are treated as carrying mass.
inline constexpr double kSupportEps = 1e-9;
/// Two greedy candidates closer than this are a tie (lowest action wins).
inline constexpr double kGreedyTieTol = 1e-9;

/// Ergodic occupation measure: weights per admissible pair, indexed by
/// the model's pair columns.
struct OccupationMeasure {
  std::vector<double> gamma;
};

/// Randomized stationary policy with an invariant distribution.
/// policy[x][slot] is the probability of the slot-th action of A(x).
struct StationaryPair {
  std::vector<std::vector<double>> policy;
  std::vector<double> dist;
  std::vector<int> support;
};

/// Feasible point (rho, h) of the dual program; h(anchor_state) = 0.
struct DualCertificate {
  double rho = 0.0;
  std::vector<double> h;
  int anchor_state = 0;
};

struct UnconstrainedSolution {
  OccupationMeasure gamma;
  double value = 0.0;
  StationaryPair pair;
  DualCertificate cert;
  lp::LPSolution lp;
};

struct OccupationResiduals {
  double normalization = 0.0;  // |sum gamma - 1|
  double balance_max = 0.0;    // max_y |balance row y|
  int balance_argmax = -1;
  double min_weight = 0.0;
};

/// min sum_{(x,a)} c0(x,a) gamma(x,a) subject to the normalization row and
/// one balance row per state; rows are [normalization, balance(0..n-1)].
lp::StandardLP build_primal(const FiniteMDP& mdp);

/// Solves the occupation LP and extracts (mu, p) and (rho, h).
/// Throws InternalInconsistency if the LP comes back infeasible or
/// unbounded, InvalidArgument if the model fails validation.
UnconstrainedSolution solve_unconstrained(const FiniteMDP& mdp, const lp::ToleranceSet& tols = {},
                                          std::ostream* trace = nullptr);

/// Splits gamma into p(x) = sum_a gamma(x,a) and mu = gamma / p on the
/// support. Off the support mu is the Dirac at the greedy action for
/// c0 + sum_y h(y) q(y|x,a).
StationaryPair decompose(const OccupationMeasure& gamma, const FiniteMDP& mdp, const DualCertificate& cert);

/// Same decomposition with an arbitrary per-pair completion cost.
StationaryPair decompose(const OccupationMeasure& gamma, const FiniteMDP& mdp,
                         std::span<const double> completion_cost, std::span<const double> h);

/// gamma(x,a) = mu(a|x) p(x), the inverse of decompose.
OccupationMeasure reconstruct(const StationaryPair& pair, const FiniteMDP& mdp);

/// J_i(mu, p) = sum_x sum_a c_i(x,a) mu(a|x) p(x).
double average_cost(const StationaryPair& pair, const FiniteMDP& mdp, int cost_index);

/// max_y |p(y) - sum_x sum_a q(y|x,a) mu(a|x) p(x)|.
double invariance_residual(const StationaryPair& pair, const FiniteMDP& mdp);

OccupationResiduals occupation_residuals(const FiniteMDP& mdp, std::span<const double> gamma);

/// <gamma, c_i> for i = 0..d.
std::vector<double> cost_vector(const FiniteMDP& mdp, std::span<const double> gamma);

/// Lowest state index carrying mass, or 0 when none does.
int anchor_state(std::span<const double> dist);

/// Slot of argmin_a {cost(x,a) + sum_y h(y) q(y|x,a)}, ties to the lowest slot.
int greedy_slot(const FiniteMDP& mdp, int x, std::span<const double> cost, std::span<const double> h);

/// cost(x,a) + sum_y h(y) q(y|x,a) for one pair column.
double lookahead(const FiniteMDP& mdp, std::size_t column, std::span<const double> cost,
                 std::span<const double> h);

/// min over pairs of c0 + sum h q - rho - h(x); >= -tol iff cert is dual feasible.
double dual_min_slack(const FiniteMDP& mdp, const DualCertificate& cert);

}  // namespace occmdp

#endif  // OCCMDP_OCCUPATION_LP_HPP_
