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

#include "occmdp/constrained_lp.hpp"

#include <cmath>
#include <limits>

#include "occmdp/errors.hpp"

namespace occmdp {

using Eigen::Index;

std::string to_string(SolveStatus status) {
  return status == SolveStatus::kOptimal ? "optimal" : "infeasible";
}

std::string to_string(LexStatus status) {
  switch (status) {
    case LexStatus::kOptimal: return "optimal";
    case LexStatus::kInfeasible: return "infeasible";
    case LexStatus::kNumericalInfeasible: return "numerically_infeasible";
  }
  return "unknown";
}

lp::StandardLP build_constrained(const FiniteMDP& mdp, const std::vector<double>& kappa) {
  const int d = mdp.num_constraints();
  if (d == 0) throw InvalidArgument("model has no constraint costs; use build_primal");
  if (static_cast<int>(kappa.size()) != d) {
    throw InvalidArgument("expected " + std::to_string(d) + " budgets, got " + std::to_string(kappa.size()));
  }
  for (double k : kappa) {
    if (!std::isfinite(k) || k < 0.0) throw InvalidArgument("budgets must be finite and nonnegative");
  }

  const lp::StandardLP base = build_primal(mdp);
  const Index n_pairs = base.num_vars();
  const Index n_rows = base.num_rows();
  lp::StandardLP out;
  out.objective = Eigen::VectorXd::Zero(n_pairs + d);
  out.objective.head(n_pairs) = base.objective;
  out.matrix = Eigen::MatrixXd::Zero(n_rows + d, n_pairs + d);
  out.matrix.topLeftCorner(n_rows, n_pairs) = base.matrix;
  out.rhs = Eigen::VectorXd::Zero(n_rows + d);
  out.rhs.head(n_rows) = base.rhs;
  for (int i = 0; i < d; ++i) {
    const auto& c = mdp.cost(i + 1);
    for (Index j = 0; j < n_pairs; ++j) out.matrix(n_rows + i, j) = c[j];
    out.matrix(n_rows + i, n_pairs + i) = 1.0;
    out.rhs(n_rows + i) = kappa[i];
  }
  return out;
}

std::vector<double> adjusted_cost(const FiniteMDP& mdp, const std::vector<double>& beta) {
  std::vector<double> out = mdp.cost(0);
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const auto& c = mdp.cost(static_cast<int>(i) + 1);
    for (std::size_t col = 0; col < out.size(); ++col) out[col] -= beta[i] * c[col];
  }
  return out;
}

double constrained_dual_min_slack(const FiniteMDP& mdp, const ConstrainedDual& cert) {
  const auto cstar = adjusted_cost(mdp, cert.beta);
  const auto& idx = mdp.pairs();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t col = 0; col < idx.size(); ++col) {
    worst = std::min(worst, lookahead(mdp, col, cstar, cert.h) - cert.rho - cert.h[idx[col].state]);
  }
  return worst;
}

ConstrainedSolution solve_constrained(const FiniteMDP& mdp, const std::vector<double>& kappa,
                                      const lp::ToleranceSet& tols, std::ostream* trace) {
  const lp::StandardLP program = build_constrained(mdp, kappa);
  ConstrainedSolution out;
  out.kappa = kappa;
  out.lp = lp::solve_simplex(program, tols, trace);
  if (out.lp.status == lp::Status::kInfeasible) {
    out.status = SolveStatus::kInfeasible;
    return out;
  }
  if (out.lp.status == lp::Status::kUnbounded) {
    throw InternalInconsistency("constrained occupation LP reported unbounded");
  }

  const int n = mdp.n_states();
  const int d = mdp.num_constraints();
  const auto n_pairs = static_cast<Index>(mdp.num_pairs());
  const auto& x = out.lp.primal;
  out.status = SolveStatus::kOptimal;
  out.gamma.gamma.assign(x.data(), x.data() + n_pairs);
  out.alpha.assign(x.data() + n_pairs, x.data() + n_pairs + d);
  out.value = out.lp.objective_value;
  out.dual_degenerate = out.lp.dual_degenerate;

  std::vector<double> dist(n, 0.0);
  const auto& idx = mdp.pairs();
  for (std::size_t col = 0; col < idx.size(); ++col) dist[idx[col].state] += out.gamma.gamma[col];
  const int anchor = anchor_state(dist);
  const auto& y = out.lp.dual;
  out.cert.rho = y(0);
  out.cert.anchor_state = anchor;
  out.cert.h.resize(n);
  for (int s = 0; s < n; ++s) out.cert.h[s] = y(1 + s) - y(1 + anchor);
  // The budget-row dual already carries the sign of the alpha column
  // constraint (y_i <= 0), which is the beta <= 0 convention.
  out.cert.beta.resize(d);
  for (int i = 0; i < d; ++i) out.cert.beta[i] = y(1 + n + i);

  for (int i = 0; i < d; ++i) {
    if (out.alpha[i] <= kBindingTol) out.binding.push_back(i);
  }
  out.pair = decompose(out.gamma, mdp, adjusted_cost(mdp, out.cert.beta), out.cert.h);
  return out;
}

double complementarity_check(const ConstrainedSolution& sol) {
  double s = 0.0;
  for (std::size_t i = 0; i < sol.alpha.size(); ++i) s += sol.alpha[i] * sol.cert.beta[i];
  return std::abs(s);
}

namespace {

// Constrained program with objective c_stage and two-sided pins
// kappa*_l - eps <= <gamma, c_l> <= kappa*_l + eps for l < stage.
lp::StandardLP build_lex_stage(const FiniteMDP& mdp, const std::vector<double>& kappa,
                               const std::vector<double>& pinned, int stage, double eps) {
  const lp::StandardLP base = build_constrained(mdp, kappa);
  const auto n_pairs = static_cast<Index>(mdp.num_pairs());
  const Index vars = base.num_vars();
  const Index rows = base.num_rows();
  const Index pins = static_cast<Index>(pinned.size());

  lp::StandardLP out;
  out.objective = Eigen::VectorXd::Zero(vars + 2 * pins);
  const auto& target = mdp.cost(stage);
  for (Index j = 0; j < n_pairs; ++j) out.objective(j) = target[j];
  out.matrix = Eigen::MatrixXd::Zero(rows + 2 * pins, vars + 2 * pins);
  out.matrix.topLeftCorner(rows, vars) = base.matrix;
  out.rhs = Eigen::VectorXd::Zero(rows + 2 * pins);
  out.rhs.head(rows) = base.rhs;
  for (Index l = 0; l < pins; ++l) {
    const auto& c = mdp.cost(static_cast<int>(l));
    const Index upper = rows + 2 * l;
    const Index lower = upper + 1;
    for (Index j = 0; j < n_pairs; ++j) {
      out.matrix(upper, j) = c[j];
      out.matrix(lower, j) = c[j];
    }
    out.matrix(upper, vars + 2 * l) = 1.0;
    out.matrix(lower, vars + 2 * l + 1) = -1.0;
    out.rhs(upper) = pinned[l] + eps;
    out.rhs(lower) = pinned[l] - eps;
  }
  return out;
}

}  // namespace

LexSolution lex_solve(const FiniteMDP& mdp, const std::vector<double>& kappa, const lp::ToleranceSet& tols,
                      const LexOptions& options) {
  LexSolution out;
  out.stage0 = solve_constrained(mdp, kappa, tols);
  if (out.stage0.status == SolveStatus::kInfeasible) {
    out.status = LexStatus::kInfeasible;
    return out;
  }
  out.kappa_star.push_back(out.stage0.value);
  out.gamma = out.stage0.gamma;
  out.lex_eps_used = options.lex_eps;

  const auto n_pairs = static_cast<std::size_t>(mdp.num_pairs());
  for (int stage = 1; stage <= mdp.num_constraints(); ++stage) {
    double eps = options.lex_eps;
    lp::LPSolution sol = lp::solve_simplex(build_lex_stage(mdp, kappa, out.kappa_star, stage, eps), tols);
    if (sol.status == lp::Status::kInfeasible) {
      eps *= 10.0;
      sol = lp::solve_simplex(build_lex_stage(mdp, kappa, out.kappa_star, stage, eps), tols);
    }
    if (sol.status == lp::Status::kInfeasible) {
      out.status = LexStatus::kNumericalInfeasible;
      out.failed_stage = stage;
      return out;
    }
    if (sol.status == lp::Status::kUnbounded) throw InternalInconsistency("lexicographic stage LP reported unbounded");
    out.lex_eps_used = std::max(out.lex_eps_used, eps);
    out.kappa_star.push_back(sol.objective_value);
    out.gamma.gamma.assign(sol.primal.data(), sol.primal.data() + n_pairs);
  }
  out.status = LexStatus::kOptimal;
  out.pair = decompose(out.gamma, mdp, adjusted_cost(mdp, out.stage0.cert.beta), out.stage0.cert.h);
  return out;
}

}  // namespace occmdp
