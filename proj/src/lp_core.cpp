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

#include "occmdp/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>

#include "occmdp/errors.hpp"

namespace occmdp::lp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "unknown";
}

void check_standard_lp(const StandardLP& lp) {
  if (lp.matrix.rows() != lp.rhs.size() || lp.matrix.cols() != lp.objective.size()) {
    throw InvalidArgument("StandardLP dimension mismatch: A is " + std::to_string(lp.matrix.rows()) + "x" +
                          std::to_string(lp.matrix.cols()) + ", b has " + std::to_string(lp.rhs.size()) +
                          ", c has " + std::to_string(lp.objective.size()));
  }
  if (!lp.matrix.allFinite() || !lp.rhs.allFinite() || !lp.objective.allFinite()) {
    throw InvalidArgument("StandardLP has non-finite entries");
  }
}

namespace {

constexpr int kIterationLimit = 200000;

// Dense tableau over [A | I] with rows sign-flipped so that b >= 0.
class Tableau {
 public:
  Tableau(const StandardLP& lp, std::ostream* trace)
      : m_(lp.num_rows()), n_(lp.num_vars()), t_(m_, n_ + m_), rhs_(m_), sign_(m_),
        basis_(m_), is_basic_(n_ + m_, false), trace_(trace) {
    t_.setZero();
    for (Index i = 0; i < m_; ++i) {
      sign_(i) = lp.rhs(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign_(i) * lp.matrix.row(i);
      t_(i, n_ + i) = 1.0;
      rhs_(i) = sign_(i) * lp.rhs(i);
      basis_[i] = static_cast<int>(n_ + i);
      is_basic_[n_ + i] = true;
    }
  }

  enum class PhaseResult { kOptimal, kUnbounded };

  // Minimizes cost over the current basis, letting only columns < n_ enter.
  PhaseResult run(const VectorXd& cost, int phase, const ToleranceSet& tols, int& iterations) {
    VectorXd cb(m_);
    for (Index i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
    Eigen::RowVectorXd reduced = cost.transpose() - cb.transpose() * t_;
    for (;;) {
      if (++iterations > kIterationLimit) throw InternalInconsistency("simplex iteration limit reached");
      // Bland: smallest eligible entering index.
      Index enter = -1;
      for (Index j = 0; j < n_; ++j) {
        if (!is_basic_[j] && reduced(j) < -tols.opt) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return PhaseResult::kOptimal;

      Index leave = -1;
      double best = 0.0;
      for (Index i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= tols.pivot) continue;
        const double ratio = std::max(rhs_(i), 0.0) / a;
        if (leave < 0) {
          leave = i;
          best = ratio;
          continue;
        }
        const double tie = 1e-12 * (1.0 + std::abs(best));
        if (ratio < best - tie || (std::abs(ratio - best) <= tie && basis_[i] < basis_[leave])) {
          leave = i;
          best = std::min(best, ratio);
        }
      }
      if (leave < 0) return PhaseResult::kUnbounded;

      if (trace_) {
        *trace_ << "phase " << phase << " iter " << iterations << ": enter x" << enter << " leave x"
                << basis_[leave] << " (row " << leave << ") ratio " << best << '\n';
      }
      pivot(leave, enter);
      const double rc = reduced(enter);
      if (rc != 0.0) reduced -= rc * t_.row(leave);
      reduced(enter) = 0.0;
    }
  }

  double value(const VectorXd& cost) const {
    double v = 0.0;
    for (Index i = 0; i < m_; ++i) v += cost(basis_[i]) * rhs_(i);
    return v;
  }

  // After phase 1: pivot zero-level artificials out where a structural
  // column is available. Rows left with an artificial are redundant.
  void drive_out_artificials(const ToleranceSet& tols) {
    for (Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      Index best_j = -1;
      double best_abs = tols.pivot;
      for (Index j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        const double a = std::abs(t_(i, j));
        if (a > best_abs) {
          best_abs = a;
          best_j = j;
        }
      }
      if (best_j < 0) continue;
      rhs_(i) = 0.0;
      if (trace_) *trace_ << "drive out artificial x" << basis_[i] << " with x" << best_j << '\n';
      pivot(i, best_j);
    }
  }

  const std::vector<int>& basis() const { return basis_; }
  const VectorXd& sign() const { return sign_; }
  const VectorXd& rhs() const { return rhs_; }

 private:
  void pivot(Index r, Index c) {
    const double p = t_(r, c);
    t_.row(r) /= p;
    rhs_(r) /= p;
    t_(r, c) = 1.0;
    for (Index i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f == 0.0) continue;
      t_.row(i) -= f * t_.row(r);
      rhs_(i) -= f * rhs_(r);
      t_(i, c) = 0.0;
    }
    is_basic_[basis_[r]] = false;
    basis_[r] = static_cast<int>(c);
    is_basic_[c] = true;
  }

  Index m_;
  Index n_;
  MatrixXd t_;
  VectorXd rhs_;
  VectorXd sign_;
  std::vector<int> basis_;
  std::vector<bool> is_basic_;
  std::ostream* trace_;
};

}  // namespace

LPSolution solve_simplex(const StandardLP& lp, const ToleranceSet& tols, std::ostream* trace) {
  check_standard_lp(lp);
  const Index m = lp.num_rows();
  const Index n = lp.num_vars();
  LPSolution sol;

  Tableau tab(lp, trace);
  VectorXd phase1_cost = VectorXd::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  tab.run(phase1_cost, 1, tols, sol.iterations);
  sol.phase1_value = tab.value(phase1_cost);
  if (sol.phase1_value > tols.feas) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  tab.drive_out_artificials(tols);

  VectorXd phase2_cost = VectorXd::Zero(n + m);
  phase2_cost.head(n) = lp.objective;
  if (tab.run(phase2_cost, 2, tols, sol.iterations) == Tableau::PhaseResult::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  // Re-solve the final basis against the original data for accuracy.
  const auto& basis = tab.basis();
  MatrixXd bmat(m, m);
  VectorXd cb(m);
  for (Index k = 0; k < m; ++k) {
    if (basis[k] < n) {
      bmat.col(k) = lp.matrix.col(basis[k]);
      cb(k) = lp.objective(basis[k]);
    } else {
      const Index row = basis[k] - n;
      bmat.col(k).setZero();
      bmat(row, k) = tab.sign()(row);
      cb(k) = 0.0;
    }
  }
  Eigen::PartialPivLU<MatrixXd> lu(bmat);
  VectorXd xb = lu.solve(lp.rhs);
  VectorXd y = lu.transpose().solve(cb);
  if (!xb.allFinite() || !y.allFinite() || (xb.array() < -tols.feas).any()) {
    // Ill-conditioned basis: fall back to the tableau values.
    xb = tab.rhs();
    y = VectorXd::Zero(m);
  }

  sol.status = Status::kOptimal;
  sol.primal = VectorXd::Zero(n);
  for (Index k = 0; k < m; ++k) {
    if (basis[k] < n) sol.primal(basis[k]) = std::max(xb(k), 0.0);
  }
  sol.dual = y;
  sol.reduced_costs = lp.objective - lp.matrix.transpose() * y;
  sol.objective_value = lp.objective.dot(sol.primal);
  sol.dual_objective = lp.rhs.dot(y);
  sol.basis = basis;

  std::vector<bool> basic(n, false);
  for (int j : basis) {
    if (j < n) basic[j] = true;
  }
  for (Index j = 0; j < n; ++j) {
    if (!basic[j] && std::abs(sol.reduced_costs(j)) <= tols.opt) {
      sol.dual_degenerate = true;
      break;
    }
  }
  return sol;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr double kVertexFeasTol = 1e-9;

struct ReducedSystem {
  MatrixXd matrix;
  VectorXd rhs;
  std::vector<Index> rows;
};

Index rank_of(const MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::FullPivLU<MatrixXd> lu(m);
  lu.setThreshold(kRankThreshold);
  return lu.rank();
}

// Keeps a maximal linearly independent subset of rows (greedy, in order).
// Returns nullopt when the system is inconsistent.
std::optional<ReducedSystem> reduce_rows(const MatrixXd& a, const VectorXd& b) {
  ReducedSystem out;
  out.matrix.resize(0, a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    MatrixXd trial(out.matrix.rows() + 1, a.cols());
    trial << out.matrix, a.row(i);
    if (rank_of(trial) > out.matrix.rows()) {
      out.matrix = std::move(trial);
      out.rows.push_back(i);
    }
  }
  out.rhs.resize(static_cast<Index>(out.rows.size()));
  for (std::size_t k = 0; k < out.rows.size(); ++k) out.rhs(static_cast<Index>(k)) = b(out.rows[k]);

  MatrixXd augmented(a.rows(), a.cols() + 1);
  augmented << a, b;
  if (rank_of(augmented) > static_cast<Index>(out.rows.size())) return std::nullopt;
  return out;
}

struct Vertex {
  VectorXd x;
  std::vector<Index> columns;
};

// Visits every basic feasible solution of {Mx = v, x >= 0} with M of full
// row rank, in lexicographic order of the column subsets.
void for_each_vertex(const ReducedSystem& sys, const std::function<void(const Vertex&)>& visit) {
  const Index r = sys.matrix.rows();
  const Index n = sys.matrix.cols();
  std::vector<Index> cols(static_cast<std::size_t>(r));
  for (Index k = 0; k < r; ++k) cols[k] = k;
  if (r > n) return;

  for (;;) {
    MatrixXd bmat(r, r);
    for (Index k = 0; k < r; ++k) bmat.col(k) = sys.matrix.col(cols[k]);
    bool ok = true;
    VectorXd xb;
    if (r > 0) {
      Eigen::FullPivLU<MatrixXd> lu(bmat);
      lu.setThreshold(kRankThreshold);
      if (!lu.isInvertible()) {
        ok = false;
      } else {
        xb = lu.solve(sys.rhs);
        const double scale = 1.0 + sys.rhs.cwiseAbs().maxCoeff();
        ok = xb.allFinite() && (bmat * xb - sys.rhs).cwiseAbs().maxCoeff() <= 1e-9 * scale &&
             (xb.array() >= -kVertexFeasTol).all();
      }
    }
    if (ok) {
      Vertex v;
      v.x = VectorXd::Zero(n);
      for (Index k = 0; k < r; ++k) v.x(cols[k]) = std::max(xb(k), 0.0);
      v.columns = cols;
      visit(v);
    }
    // Next combination.
    Index k = r - 1;
    while (k >= 0 && cols[k] == n - r + k) --k;
    if (k < 0) return;
    ++cols[k];
    for (Index l = k + 1; l < r; ++l) cols[l] = cols[l - 1] + 1;
  }
}

void check_guard(Index n, Index rank, const EnumerationGuard& guard) {
  if (n > guard.max_vars) {
    throw EnumerationGuardExceeded("enumeration guard: " + std::to_string(n) + " variables exceeds " +
                                   std::to_string(guard.max_vars));
  }
  if (binomial(static_cast<int>(n), static_cast<int>(rank)) > guard.max_subsets) {
    throw EnumerationGuardExceeded("enumeration guard: C(" + std::to_string(n) + "," + std::to_string(rank) +
                                   ") basis subsets exceeds " + std::to_string(guard.max_subsets));
  }
}

}  // namespace

std::vector<VectorXd> enumerate_feasible_vertices(const StandardLP& lp, const EnumerationGuard& guard) {
  check_standard_lp(lp);
  if (lp.num_vars() > guard.max_vars) check_guard(lp.num_vars(), 0, guard);
  auto sys = reduce_rows(lp.matrix, lp.rhs);
  std::vector<VectorXd> out;
  if (!sys) return out;
  check_guard(lp.num_vars(), sys->matrix.rows(), guard);
  for_each_vertex(*sys, [&](const Vertex& v) { out.push_back(v.x); });
  return out;
}

LPSolution enumerate_bfs_optimum(const StandardLP& lp, const EnumerationGuard& guard) {
  check_standard_lp(lp);
  const Index n = lp.num_vars();
  if (n > guard.max_vars) check_guard(n, 0, guard);
  LPSolution sol;
  sol.status = Status::kInfeasible;

  auto sys = reduce_rows(lp.matrix, lp.rhs);
  if (!sys) return sol;
  check_guard(n, sys->matrix.rows(), guard);

  // Rays of the recession cone, normalized to the simplex.
  MatrixXd ray_m(lp.matrix.rows() + 1, n);
  ray_m << lp.matrix, Eigen::RowVectorXd::Ones(n);
  VectorXd ray_b = VectorXd::Zero(lp.matrix.rows() + 1);
  ray_b(lp.matrix.rows()) = 1.0;
  auto ray_sys = reduce_rows(ray_m, ray_b);
  if (ray_sys) check_guard(n, ray_sys->matrix.rows(), guard);

  std::optional<Vertex> best;
  double best_value = 0.0;
  for_each_vertex(*sys, [&](const Vertex& v) {
    const double value = lp.objective.dot(v.x);
    if (!best || value < best_value) {
      best = v;
      best_value = value;
    }
  });
  if (!best) {
    // Consistent system without a nonnegative basic solution: genuinely
    // infeasible unless phase 1 disagrees.
    if (solve_simplex(lp).status == Status::kOptimal) {
      throw InternalInconsistency("no basic feasible solution found but phase 1 reports a feasible point");
    }
    return sol;
  }

  if (ray_sys) {
    bool unbounded = false;
    for_each_vertex(*ray_sys, [&](const Vertex& d) {
      if (lp.objective.dot(d.x) < -kVertexFeasTol) unbounded = true;
    });
    if (unbounded) {
      sol.status = Status::kUnbounded;
      return sol;
    }
  }

  sol.status = Status::kOptimal;
  sol.primal = best->x;
  sol.objective_value = best_value;
  sol.basis.assign(best->columns.begin(), best->columns.end());
  const Index r = sys->matrix.rows();
  VectorXd y = VectorXd::Zero(lp.num_rows());
  if (r > 0) {
    MatrixXd bmat(r, r);
    VectorXd cb(r);
    for (Index k = 0; k < r; ++k) {
      bmat.col(k) = sys->matrix.col(best->columns[k]);
      cb(k) = lp.objective(best->columns[k]);
    }
    const VectorXd yr = bmat.transpose().fullPivLu().solve(cb);
    for (Index k = 0; k < r; ++k) y(sys->rows[k]) = yr(k);
  }
  sol.dual = y;
  sol.reduced_costs = lp.objective - lp.matrix.transpose() * y;
  sol.dual_objective = lp.rhs.dot(y);
  return sol;
}

}  // namespace occmdp::lp
