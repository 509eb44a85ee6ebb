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

#include "occmdp/occupation_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "occmdp/errors.hpp"

namespace occmdp {

lp::StandardLP build_primal(const FiniteMDP& mdp) {
  const auto report = validate(mdp);
  if (!report.ok()) throw InvalidArgument("invalid model: " + report.violations.front().message);

  const int n = mdp.n_states();
  const auto cols = static_cast<Eigen::Index>(mdp.num_pairs());
  lp::StandardLP out;
  out.objective.resize(cols);
  out.matrix = Eigen::MatrixXd::Zero(1 + n, cols);
  out.rhs = Eigen::VectorXd::Zero(1 + n);
  out.rhs(0) = 1.0;
  const auto& idx = mdp.pairs();
  for (Eigen::Index j = 0; j < cols; ++j) {
    out.objective(j) = mdp.cost(0)[j];
    out.matrix(0, j) = 1.0;
    out.matrix(1 + idx[j].state, j) += 1.0;
    for (int y = 0; y < n; ++y) out.matrix(1 + y, j) -= mdp.q(y, j);
  }
  return out;
}

int anchor_state(std::span<const double> dist) {
  for (std::size_t x = 0; x < dist.size(); ++x) {
    if (dist[x] > kSupportEps) return static_cast<int>(x);
  }
  return 0;
}

double lookahead(const FiniteMDP& mdp, std::size_t column, std::span<const double> cost,
                 std::span<const double> h) {
  double v = cost[column];
  const auto& row = mdp.row(column);
  for (int y = 0; y < mdp.n_states(); ++y) v += h[y] * row[y];
  return v;
}

int greedy_slot(const FiniteMDP& mdp, int x, std::span<const double> cost, std::span<const double> h) {
  const auto& idx = mdp.pairs();
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int col = idx.begin(x); col < idx.end(x); ++col) {
    const double v = lookahead(mdp, col, cost, h);
    if (v < best_value - kGreedyTieTol) {
      best_value = v;
      best = col - idx.begin(x);
    }
  }
  return best;
}

StationaryPair decompose(const OccupationMeasure& gamma, const FiniteMDP& mdp,
                         std::span<const double> completion_cost, std::span<const double> h) {
  const int n = mdp.n_states();
  const auto& idx = mdp.pairs();
  if (gamma.gamma.size() != idx.size()) throw InvalidArgument("gamma length differs from |Gamma|");
  StationaryPair pair;
  pair.dist.assign(n, 0.0);
  pair.policy.resize(n);
  for (int x = 0; x < n; ++x) {
    for (int col = idx.begin(x); col < idx.end(x); ++col) pair.dist[x] += gamma.gamma[col];
  }
  for (int x = 0; x < n; ++x) {
    pair.policy[x].assign(mdp.actions()[x].size(), 0.0);
    if (pair.dist[x] > kSupportEps) pair.support.push_back(x);
    if (pair.dist[x] > 0.0) {
      for (int col = idx.begin(x); col < idx.end(x); ++col) {
        pair.policy[x][col - idx.begin(x)] = gamma.gamma[col] / pair.dist[x];
      }
    } else {
      pair.policy[x][greedy_slot(mdp, x, completion_cost, h)] = 1.0;
    }
  }
  return pair;
}

StationaryPair decompose(const OccupationMeasure& gamma, const FiniteMDP& mdp, const DualCertificate& cert) {
  return decompose(gamma, mdp, mdp.cost(0), cert.h);
}

OccupationMeasure reconstruct(const StationaryPair& pair, const FiniteMDP& mdp) {
  const auto& idx = mdp.pairs();
  OccupationMeasure out;
  out.gamma.resize(idx.size());
  for (std::size_t col = 0; col < idx.size(); ++col) {
    out.gamma[col] = pair.policy[idx[col].state][idx[col].slot] * pair.dist[idx[col].state];
  }
  return out;
}

double average_cost(const StationaryPair& pair, const FiniteMDP& mdp, int cost_index) {
  if (cost_index < 0 || cost_index > mdp.num_constraints()) {
    throw InvalidArgument("cost index " + std::to_string(cost_index) + " out of range 0.." +
                          std::to_string(mdp.num_constraints()));
  }
  const auto& idx = mdp.pairs();
  const auto& c = mdp.cost(cost_index);
  double total = 0.0;
  for (std::size_t col = 0; col < idx.size(); ++col) {
    total += c[col] * pair.policy[idx[col].state][idx[col].slot] * pair.dist[idx[col].state];
  }
  return total;
}

double invariance_residual(const StationaryPair& pair, const FiniteMDP& mdp) {
  const int n = mdp.n_states();
  const auto& idx = mdp.pairs();
  std::vector<double> next(n, 0.0);
  for (std::size_t col = 0; col < idx.size(); ++col) {
    const double w = pair.policy[idx[col].state][idx[col].slot] * pair.dist[idx[col].state];
    if (w == 0.0) continue;
    const auto& row = mdp.row(col);
    for (int y = 0; y < n; ++y) next[y] += w * row[y];
  }
  double worst = 0.0;
  for (int y = 0; y < n; ++y) worst = std::max(worst, std::abs(pair.dist[y] - next[y]));
  return worst;
}

OccupationResiduals occupation_residuals(const FiniteMDP& mdp, std::span<const double> gamma) {
  const int n = mdp.n_states();
  const auto& idx = mdp.pairs();
  OccupationResiduals r;
  std::vector<double> balance(n, 0.0);
  double total = 0.0;
  r.min_weight = std::numeric_limits<double>::infinity();
  for (std::size_t col = 0; col < idx.size(); ++col) {
    const double w = gamma[col];
    total += w;
    r.min_weight = std::min(r.min_weight, w);
    balance[idx[col].state] += w;
    const auto& row = mdp.row(col);
    for (int y = 0; y < n; ++y) balance[y] -= row[y] * w;
  }
  r.normalization = std::abs(total - 1.0);
  for (int y = 0; y < n; ++y) {
    if (std::abs(balance[y]) > r.balance_max || r.balance_argmax < 0) {
      r.balance_max = std::abs(balance[y]);
      r.balance_argmax = y;
    }
  }
  return r;
}

std::vector<double> cost_vector(const FiniteMDP& mdp, std::span<const double> gamma) {
  std::vector<double> out;
  for (int i = 0; i <= mdp.num_constraints(); ++i) {
    const auto& c = mdp.cost(i);
    double v = 0.0;
    for (std::size_t col = 0; col < gamma.size(); ++col) v += c[col] * gamma[col];
    out.push_back(v);
  }
  return out;
}

double dual_min_slack(const FiniteMDP& mdp, const DualCertificate& cert) {
  const auto& idx = mdp.pairs();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t col = 0; col < idx.size(); ++col) {
    const double slack = lookahead(mdp, col, mdp.cost(0), cert.h) - cert.rho - cert.h[idx[col].state];
    worst = std::min(worst, slack);
  }
  return worst;
}

UnconstrainedSolution solve_unconstrained(const FiniteMDP& mdp, const lp::ToleranceSet& tols,
                                          std::ostream* trace) {
  const lp::StandardLP program = build_primal(mdp);
  UnconstrainedSolution out;
  out.lp = lp::solve_simplex(program, tols, trace);
  if (out.lp.status != lp::Status::kOptimal) {
    throw InternalInconsistency("occupation LP of a valid model returned " + lp::to_string(out.lp.status));
  }
  const int n = mdp.n_states();
  out.gamma.gamma.assign(out.lp.primal.data(), out.lp.primal.data() + out.lp.primal.size());
  out.value = out.lp.objective_value;

  std::vector<double> dist(n, 0.0);
  const auto& idx = mdp.pairs();
  for (std::size_t col = 0; col < idx.size(); ++col) dist[idx[col].state] += out.gamma.gamma[col];
  const int anchor = anchor_state(dist);
  out.cert.rho = out.lp.dual(0);
  out.cert.anchor_state = anchor;
  out.cert.h.resize(n);
  for (int x = 0; x < n; ++x) out.cert.h[x] = out.lp.dual(1 + x) - out.lp.dual(1 + anchor);
  out.pair = decompose(out.gamma, mdp, out.cert);
  return out;
}

}  // namespace occmdp
