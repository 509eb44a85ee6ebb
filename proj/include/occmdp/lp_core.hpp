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

#ifndef OCCMDP_LP_CORE_HPP_
#define OCCMDP_LP_CORE_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace occmdp::lp {

/// min c'x  s.t.  Ax = b, x >= 0.
struct StandardLP {
  Eigen::VectorXd objective;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;

  Eigen::Index num_vars() const { return objective.size(); }
  Eigen::Index num_rows() const { return rhs.size(); }
};

struct ToleranceSet {
  double feas = 1e-9;
  double opt = 1e-9;
  double gap = 1e-8;
  double pivot = 1e-10;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

std::string to_string(Status status);

/// Primal/dual pair of a StandardLP. Vectors are empty unless kOptimal.
///
/// `dual` solves the dual program max b'y s.t. A'y <= c, so
/// reduced_costs = c - A'y is componentwise >= -opt at optimality.
struct LPSolution {
  Status status = Status::kInfeasible;
  Eigen::VectorXd primal;
  Eigen::VectorXd dual;
  Eigen::VectorXd reduced_costs;
  double objective_value = 0.0;
  double dual_objective = 0.0;
  std::vector<int> basis;
  /// Some nonbasic column has a zero reduced cost, so other optimal bases
  /// (and possibly other dual certificates) exist.
  bool dual_degenerate = false;
  int iterations = 0;
  /// Phase-1 optimum; positive beyond tolerance when infeasible.
  double phase1_value = 0.0;
};

/// Throws InvalidArgument on dimension mismatch or non-finite entries.
void check_standard_lp(const StandardLP& lp);

/// Two-phase dense tableau simplex with Bland's smallest-index rule.
/// Redundant equality rows keep their artificial variable basic at zero.
/// When `trace` is non-null every pivot is logged there.
LPSolution solve_simplex(const StandardLP& lp, const ToleranceSet& tols = {},
                         std::ostream* trace = nullptr);

/// Largest instance the enumerator accepts.
struct EnumerationGuard {
  int max_vars = 24;
  std::uint64_t max_subsets = 1'000'000;
};

/// Every basic feasible solution of the polytope {Ax = b, x >= 0}, each
/// as a dense primal vector, in lexicographic order of the basis subsets.
/// Rank-deficient A is reduced to a maximal independent row subset first.
std::vector<Eigen::VectorXd> enumerate_feasible_vertices(const StandardLP& lp,
                                                         const EnumerationGuard& guard = {});

/// Exhaustive oracle: minimum over all basic feasible solutions, with an
/// extreme-ray scan of {Ad = 0, d >= 0, sum d = 1} to detect unboundedness.
/// Throws EnumerationGuardExceeded when the guard is violated.
LPSolution enumerate_bfs_optimum(const StandardLP& lp, const EnumerationGuard& guard = {});

/// n choose k, saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

}  // namespace occmdp::lp

#endif  // OCCMDP_LP_CORE_HPP_
