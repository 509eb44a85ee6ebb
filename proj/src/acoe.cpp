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

#include "occmdp/acoe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "occmdp/errors.hpp"

namespace occmdp {

AcoeReport acoe_check(const FiniteMDP& mdp, std::span<const double> cost, double level,
                      std::span<const double> h, const StationaryPair& pair, const AcoeTolerances& tols) {
  const int n = mdp.n_states();
  const auto& idx = mdp.pairs();
  if (static_cast<int>(h.size()) != n || cost.size() != idx.size()) {
    throw InvalidArgument("ACOE check: h or cost has the wrong length");
  }
  AcoeReport report;
  report.level = level;
  report.pair_slack.resize(idx.size());
  report.min_slack = std::numeric_limits<double>::infinity();
  report.support_covered = true;

  for (int x = 0; x < n; ++x) {
    AcoeStateRow row;
    row.state = x;
    row.p = pair.dist[x];
    row.h = h[x];
    double best = std::numeric_limits<double>::infinity();
    double averaged = 0.0;
    for (int col = idx.begin(x); col < idx.end(x); ++col) {
      const double v = lookahead(mdp, col, cost, h);
      report.pair_slack[col] = v - level - h[x];
      averaged += pair.policy[x][col - idx.begin(x)] * v;
      best = std::min(best, v);
    }
    row.argmin_action = mdp.actions()[x][greedy_slot(mdp, x, cost, h)];
    row.slack = best - level - h[x];
    row.randomized_slack = averaged - level - h[x];
    row.equality = std::abs(row.slack) <= tols.equality;
    if (row.equality) report.equality_states.push_back(x);
    report.min_slack = std::min(report.min_slack, row.slack);
    if (row.p > tols.support_eps) {
      if (!row.equality) report.support_covered = false;
      report.randomized_max_dev = std::max(report.randomized_max_dev, std::abs(row.randomized_slack));
    }
    report.per_state.push_back(row);
  }
  report.inequality_ok = report.min_slack >= -tols.inequality;
  report.randomized_ok = report.randomized_max_dev <= tols.randomized;
  return report;
}

AcoeReport acoe_residuals(const FiniteMDP& mdp, const DualCertificate& cert, const StationaryPair& pair,
                          std::span<const double> cost, const AcoeTolerances& tols) {
  return acoe_check(mdp, cost, cert.rho, cert.h, pair, tols);
}

AcoeReport constrained_acoe_residuals(const FiniteMDP& mdp, const ConstrainedDual& cdual,
                                      const StationaryPair& pair, const std::vector<double>& kappa,
                                      double value, const AcoeTolerances& tols) {
  if (kappa.size() != cdual.beta.size()) throw InvalidArgument("kappa and beta lengths differ");
  const std::vector<double> cstar = adjusted_cost(mdp, cdual.beta);
  double level = value;
  for (std::size_t i = 0; i < kappa.size(); ++i) level -= cdual.beta[i] * kappa[i];
  return acoe_check(mdp, cstar, level, cdual.h, pair, tols);
}

bool GreedyPolicy::in_absorbing_set(int x) const {
  return std::binary_search(absorbing_set.begin(), absorbing_set.end(), x);
}

GreedyPolicy extract_greedy_policy(const FiniteMDP& mdp, std::span<const double> cost, std::span<const double> h,
                                   const AcoeReport& report, const AcoeTolerances& tols) {
  const int n = mdp.n_states();
  const auto& idx = mdp.pairs();
  GreedyPolicy f;
  f.slot.resize(n);
  f.action.resize(n);
  for (int x = 0; x < n; ++x) {
    f.slot[x] = greedy_slot(mdp, x, cost, h);
    f.action[x] = mdp.actions()[x][f.slot[x]];
  }

  // Greatest fixed point over the equality states: a state stays while one
  // of its tight actions keeps all but absorbing_mass inside the set. Ties
  // inside the set go to the lowest such action.
  std::vector<bool> member(n, false);
  for (int x : report.equality_states) member[x] = true;
  auto closing_slot = [&](int x) {
    for (int col = idx.begin(x); col < idx.end(x); ++col) {
      if (std::abs(report.pair_slack[col]) > tols.equality) continue;
      const auto& row = mdp.row(col);
      double inside = 0.0;
      for (int y = 0; y < n; ++y) {
        if (member[y]) inside += row[y];
      }
      if (inside >= 1.0 - tols.absorbing_mass) return col - idx.begin(x);
    }
    return -1;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < n; ++x) {
      if (member[x] && closing_slot(x) < 0) {
        member[x] = false;
        changed = true;
      }
    }
  }
  for (int x = 0; x < n; ++x) {
    if (!member[x]) continue;
    f.slot[x] = closing_slot(x);
    f.action[x] = mdp.actions()[x][f.slot[x]];
    f.absorbing_set.push_back(x);
  }
  return f;
}

GreedyPolicy extract_greedy_policy(const FiniteMDP& mdp, const DualCertificate& cert, const StationaryPair& pair,
                                   std::span<const double> cost, const AcoeTolerances& tols) {
  const AcoeReport report = acoe_residuals(mdp, cert, pair, cost, tols);
  return extract_greedy_policy(mdp, cost, cert.h, report, tols);
}

}  // namespace occmdp
