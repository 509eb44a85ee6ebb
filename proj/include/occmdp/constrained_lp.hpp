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

#ifndef OCCMDP_CONSTRAINED_LP_HPP_
#define OCCMDP_CONSTRAINED_LP_HPP_

#include <iosfwd>
#include <vector>

#include "occmdp/lp_core.hpp"
#include "occmdp/mdp_model.hpp"
#include "occmdp/occupation_lp.hpp"

namespace occmdp {

/// Budget rows with slack at or below this are reported as binding.
inline constexpr double kBindingTol = 1e-9;

/// Dual point (rho, h, beta) of the budget-constrained program:
///   rho + h(x) - sum_y h(y) q(y|x,a) + sum_i beta_i c_i(x,a) <= c0(x,a),
///   beta <= 0.
struct ConstrainedDual {
  double rho = 0.0;
  std::vector<double> h;
  std::vector<double> beta;
  int anchor_state = 0;
};

enum class SolveStatus { kOptimal, kInfeasible };

struct ConstrainedSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> kappa;
  OccupationMeasure gamma;
  std::vector<double> alpha;
  double value = 0.0;
  StationaryPair pair;
  ConstrainedDual cert;
  /// Budget indices (0-based) whose slack is <= kBindingTol.
  std::vector<int> binding;
  bool dual_degenerate = false;
  lp::LPSolution lp;
};

/// Variables (gamma, alpha), rows [normalization, balance(0..n-1),
/// budget(1..d)] with <gamma, c_i> + alpha_i = kappa_i.
/// Throws InvalidArgument when d = 0, kappa has the wrong length or a
/// negative entry.
lp::StandardLP build_constrained(const FiniteMDP& mdp, const std::vector<double>& kappa);

/// Infeasible budgets are returned as status kInfeasible, not thrown.
ConstrainedSolution solve_constrained(const FiniteMDP& mdp, const std::vector<double>& kappa,
                                      const lp::ToleranceSet& tols = {}, std::ostream* trace = nullptr);

/// |<alpha, beta>|.
double complementarity_check(const ConstrainedSolution& sol);

/// Per-pair adjusted cost c0 - sum_i beta_i c_i.
std::vector<double> adjusted_cost(const FiniteMDP& mdp, const std::vector<double>& beta);

/// min over pairs of the slack in the constrained dual row; >= -tol iff
/// the (rho, h, beta) part of the certificate is feasible.
double constrained_dual_min_slack(const FiniteMDP& mdp, const ConstrainedDual& cert);

struct LexOptions {
  double lex_eps = 1e-8;
};

enum class LexStatus { kOptimal, kInfeasible, kNumericalInfeasible };

struct LexSolution {
  LexStatus status = LexStatus::kInfeasible;
  /// kappa*_0 .. kappa*_d.
  std::vector<double> kappa_star;
  OccupationMeasure gamma;
  StationaryPair pair;
  ConstrainedSolution stage0;
  /// Stage at which the pins could not be met (kNumericalInfeasible only).
  int failed_stage = -1;
  /// Largest pin tolerance actually used.
  double lex_eps_used = 0.0;
};

/// Stage 0 solves the constrained program; stage i minimizes <gamma, c_i>
/// with every earlier stage value pinned to within lex_eps.
LexSolution lex_solve(const FiniteMDP& mdp, const std::vector<double>& kappa, const lp::ToleranceSet& tols = {},
                      const LexOptions& options = {});

std::string to_string(SolveStatus status);
std::string to_string(LexStatus status);

}  // namespace occmdp

#endif  // OCCMDP_CONSTRAINED_LP_HPP_
