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

#include "occmdp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include <Eigen/Dense>

#include "occmdp/errors.hpp"

namespace occmdp::oracles {

namespace {

constexpr double kClassResidualTol = 1e-10;

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int counter = 0;

  struct Frame {
    int v;
    std::size_t next;
  };
  std::vector<Frame> calls;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    calls.push_back({root, 0});
    while (!calls.empty()) {
      const int v = calls.back().v;
      if (calls.back().next < adjacency[v].size()) {
        const int w = adjacency[v][calls.back().next++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          calls.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      calls.pop_back();
      if (!calls.empty()) {
        const int u = calls.back().v;
        low[u] = std::min(low[u], low[v]);
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

ChainAnalysis analyze_policy_slots(const FiniteMDP& mdp, std::span<const int> slots) {
  const int n = mdp.n_states();
  const auto& idx = mdp.pairs();
  if (static_cast<int>(slots.size()) != n) throw InvalidArgument("policy length differs from n_states");
  std::vector<int> column(n);
  std::vector<std::vector<int>> adjacency(n);
  for (int x = 0; x < n; ++x) {
    if (slots[x] < 0 || slots[x] >= idx.end(x) - idx.begin(x)) {
      throw InvalidArgument("policy slot out of range at state " + std::to_string(x));
    }
    column[x] = idx.column(x, slots[x]);
    const auto& row = mdp.row(column[x]);
    for (int y = 0; y < n; ++y) {
      if (row[y] > 0.0) adjacency[x].push_back(y);
    }
  }

  ChainAnalysis out;
  std::vector<bool> recurrent(n, false);
  for (auto& comp : strongly_connected_components(adjacency)) {
    std::vector<bool> in_comp(n, false);
    for (int x : comp) in_comp[x] = true;
    bool closed = true;
    for (int x : comp) {
      for (int y : adjacency[x]) closed = closed && in_comp[y];
    }
    if (!closed) continue;

    // p (P_C - I) = 0 with the last equation replaced by sum p = 1.
    const auto k = static_cast<Eigen::Index>(comp.size());
    Eigen::MatrixXd system(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto& row = mdp.row(column[comp[r]]);
      for (Eigen::Index c = 0; c < k; ++c) system(c, r) = row[comp[c]] - (r == c ? 1.0 : 0.0);
    }
    system.row(k - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs(k - 1) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) throw InternalInconsistency("singular stationary system on a closed class");
    const Eigen::VectorXd p = lu.solve(rhs);

    double residual = std::abs(p.sum() - 1.0);
    for (Eigen::Index c = 0; c < k; ++c) {
      double flow = 0.0;
      for (Eigen::Index r = 0; r < k; ++r) flow += p(r) * mdp.row(column[comp[r]])[comp[c]];
      residual = std::max(residual, std::abs(flow - p(c)));
    }
    if (!p.allFinite() || residual > kClassResidualTol) {
      throw InternalInconsistency("stationary distribution residual " + std::to_string(residual) +
                                  " on a closed class");
    }

    std::vector<double> dist(p.data(), p.data() + k);
    std::vector<double> costs;
    for (int i = 0; i <= mdp.num_constraints(); ++i) {
      double v = 0.0;
      for (Eigen::Index r = 0; r < k; ++r) v += dist[r] * mdp.cost(i)[column[comp[r]]];
      costs.push_back(v);
    }
    for (int x : comp) recurrent[x] = true;
    out.classes.push_back(std::move(comp));
    out.class_dists.push_back(std::move(dist));
    out.class_costs.push_back(std::move(costs));
  }
  for (int x = 0; x < n; ++x) {
    if (!recurrent[x]) out.transient.push_back(x);
  }
  return out;
}

ChainAnalysis analyze_policy_chain(const FiniteMDP& mdp, const DeterministicPolicy& f) {
  const int n = mdp.n_states();
  if (static_cast<int>(f.size()) != n) throw InvalidArgument("policy length differs from n_states");
  std::vector<int> slots(n);
  for (int x = 0; x < n; ++x) {
    const auto col = mdp.pairs().find(x, f[x]);
    if (!col) throw InvalidArgument("action " + std::to_string(f[x]) + " not admissible at state " + std::to_string(x));
    slots[x] = *col - mdp.pairs().begin(x);
  }
  return analyze_policy_slots(mdp, slots);
}

std::uint64_t count_policies(const FiniteMDP& mdp) {
  std::uint64_t total = 1;
  for (const auto& ax : mdp.actions()) {
    if (ax.empty()) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / ax.size()) return std::numeric_limits<std::uint64_t>::max();
    total *= ax.size();
  }
  return total;
}

std::vector<int> policy_slots_from_index(const FiniteMDP& mdp, std::uint64_t index) {
  std::vector<int> slots(mdp.n_states());
  for (int x = 0; x < mdp.n_states(); ++x) {
    const auto radix = static_cast<std::uint64_t>(mdp.actions()[x].size());
    slots[x] = static_cast<int>(index % radix);
    index /= radix;
  }
  return slots;
}

namespace {

struct Candidate {
  bool set = false;
  double value = 0.0;
  std::uint64_t policy = 0;
  std::size_t klass = 0;
  std::vector<int> members;

  // Strict order on (value, policy index, class index).
  bool better_than(const Candidate& other) const {
    if (!other.set) return set;
    if (!set) return false;
    if (value != other.value) return value < other.value;
    if (policy != other.policy) return policy < other.policy;
    return klass < other.klass;
  }
};

void consider_policy(const FiniteMDP& mdp, std::uint64_t k, Candidate& best) {
  const auto slots = policy_slots_from_index(mdp, k);
  const ChainAnalysis chain = analyze_policy_slots(mdp, slots);
  for (std::size_t c = 0; c < chain.classes.size(); ++c) {
    Candidate cand{true, chain.class_costs[c][0], k, c, {}};
    if (cand.better_than(best)) {
      cand.members = chain.classes[c];
      best = std::move(cand);
    }
  }
}

std::uint64_t checked_policy_count(const FiniteMDP& mdp, const PolicyLimit& limit) {
  const auto report = validate(mdp);
  if (!report.ok()) throw InvalidArgument("invalid model: " + report.violations.front().message);
  const std::uint64_t total = count_policies(mdp);
  if (total > limit.max_policies) {
    throw EnumerationGuardExceeded("policy enumeration guard: " + std::to_string(total) + " policies exceeds " +
                                   std::to_string(limit.max_policies));
  }
  return total;
}

BruteForceResult finish(const FiniteMDP& mdp, const Candidate& best, std::uint64_t total) {
  if (!best.set) throw InternalInconsistency("no closed class found under any policy");
  BruteForceResult out;
  out.value = best.value;
  out.policy_index = best.policy;
  out.policies = total;
  out.witness_class = best.members;
  const auto slots = policy_slots_from_index(mdp, best.policy);
  for (int x = 0; x < mdp.n_states(); ++x) out.policy.push_back(mdp.actions()[x][slots[x]]);
  return out;
}

}  // namespace

BruteForceResult brute_force_minimum_value_serial(const FiniteMDP& mdp, const PolicyLimit& limit) {
  const std::uint64_t total = checked_policy_count(mdp, limit);
  Candidate best;
  for (std::uint64_t k = 0; k < total; ++k) consider_policy(mdp, k, best);
  return finish(mdp, best, total);
}

BruteForceResult brute_force_minimum_value(const FiniteMDP& mdp, const PolicyLimit& limit) {
  const std::uint64_t total = checked_policy_count(mdp, limit);
  Candidate best;
  std::exception_ptr failure;
  const auto count = static_cast<long long>(total);
#pragma omp parallel
  {
    Candidate local;
#pragma omp for schedule(static)
    for (long long k = 0; k < count; ++k) {
      try {
        consider_policy(mdp, static_cast<std::uint64_t>(k), local);
      } catch (...) {
#pragma omp critical(occmdp_bruteforce_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(occmdp_bruteforce_merge)
    if (local.better_than(best)) best = std::move(local);
  }
  if (failure) std::rethrow_exception(failure);
  return finish(mdp, best, total);
}

RviResult relative_value_iteration(const FiniteMDP& mdp, const RviOptions& options) {
  const auto report = validate(mdp);
  if (!report.ok()) throw InvalidArgument("invalid model: " + report.violations.front().message);
  const int n = mdp.n_states();
  const auto& idx = mdp.pairs();
  const double tau = options.damping;
  if (!(tau >= 0.0 && tau < 1.0)) throw InvalidArgument("damping must lie in [0,1)");
  if (options.anchor < 0 || options.anchor >= n) throw InvalidArgument("anchor state out of range");
  const auto& c0 = mdp.cost(0);

  std::vector<double> h(n, 0.0), next(n, 0.0);
  std::vector<int> slots(n, 0);
  RviResult out;
  double span = std::numeric_limits<double>::infinity();
  double rho = 0.0;
  bool converged = false;
  for (int it = 1; it <= options.max_iters; ++it) {
    for (int x = 0; x < n; ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (int col = idx.begin(x); col < idx.end(x); ++col) {
        double expected = 0.0;
        const auto& row = mdp.row(col);
        for (int y = 0; y < n; ++y) expected += row[y] * h[y];
        const double v = c0[col] + (1.0 - tau) * expected + tau * h[x];
        if (v < best) {
          best = v;
          slots[x] = col - idx.begin(x);
        }
      }
      next[x] = best;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int x = 0; x < n; ++x) {
      lo = std::min(lo, next[x] - h[x]);
      hi = std::max(hi, next[x] - h[x]);
    }
    span = hi - lo;
    rho = 0.5 * (lo + hi);
    const double shift = next[options.anchor];
    for (int x = 0; x < n; ++x) h[x] = next[x] - shift;
    out.iterations = it;
    if (span <= options.span_tol) {
      converged = true;
      break;
    }
  }

  for (int x = 0; x < n; ++x) out.greedy.push_back(mdp.actions()[x][slots[x]]);
  const ChainAnalysis chain = analyze_policy_slots(mdp, slots);
  if (chain.classes.size() != 1) {
    throw MultichainRefusal("relative value iteration refused: greedy policy has " +
                            std::to_string(chain.classes.size()) + " recurrent classes");
  }
  if (!converged) {
    throw NonConvergence("relative value iteration did not converge in " + std::to_string(options.max_iters) +
                             " iterations (span " + std::to_string(span) + ")",
                         span);
  }
  out.rho = rho;
  out.final_span = span;
  out.h.resize(n);
  for (int x = 0; x < n; ++x) out.h[x] = (1.0 - tau) * h[x];
  return out;
}

lp::StandardLP assemble_constrained_lp(const FiniteMDP& mdp, const std::vector<double>& kappa) {
  const int n = mdp.n_states();
  const int d = mdp.num_constraints();
  if (d < 1) throw InvalidArgument("constrained oracle needs at least one constraint cost");
  if (static_cast<int>(kappa.size()) != d) throw InvalidArgument("kappa length differs from the number of constraint costs");
  const auto& idx = mdp.pairs();
  const auto pairs = static_cast<Eigen::Index>(idx.size());
  const Eigen::Index rows = d + n + 1;
  const Eigen::Index cols = pairs + d;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
  Eigen::Index r = 0;
  for (int i = 1; i <= d; ++i, ++r) {
    for (Eigen::Index j = 0; j < pairs; ++j) a(r, j) = mdp.cost(i)[j];
    a(r, pairs + i - 1) = 1.0;
    b(r) = kappa[i - 1];
  }
  for (int y = 0; y < n; ++y, ++r) {
    // Outflow of y minus inflow into y.
    for (Eigen::Index j = 0; j < pairs; ++j) {
      const double out_flow = idx[j].state == y ? 1.0 : 0.0;
      a(r, j) = out_flow - mdp.q(y, j);
    }
  }
  for (Eigen::Index j = 0; j < pairs; ++j) {
    a(r, j) = 1.0;
    c(j) = mdp.cost(0)[j];
  }
  b(r) = 1.0;
  ++r;

  if (r != rows || a.cols() != pairs + d) throw InternalInconsistency("constrained oracle assembly shape mismatch");
  return {c, a, b};
}

ConstrainedOracleResult brute_force_constrained_value(const FiniteMDP& mdp, const std::vector<double>& kappa,
                                                      const lp::EnumerationGuard& guard) {
  const lp::LPSolution sol = lp::enumerate_bfs_optimum(assemble_constrained_lp(mdp, kappa), guard);
  return {sol.status, sol.status == lp::Status::kOptimal ? sol.objective_value : 0.0};
}

}  // namespace occmdp::oracles
