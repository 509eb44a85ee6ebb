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

#ifndef OCCMDP_MDP_MODEL_HPP_
#define OCCMDP_MDP_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace occmdp {

/// One admissible state-action pair. `slot` is the position of `action`
/// inside A(state); `action` is the user-facing action id.
struct PairRef {
  int state = 0;
  int slot = 0;
  int action = 0;
};

/// Dense enumeration of the admissible pairs, ordered by (state, action id).
/// Column j of every LP built from a model corresponds to pairs()[j].
class AdmissiblePairIndex {
 public:
  AdmissiblePairIndex() = default;
  explicit AdmissiblePairIndex(const std::vector<std::vector<int>>& actions);

  std::size_t size() const { return pairs_.size(); }
  const PairRef& operator[](std::size_t column) const { return pairs_[column]; }
  std::span<const PairRef> pairs() const { return pairs_; }

  /// Columns of state x form the half-open range [begin(x), end(x)).
  int begin(int x) const { return offsets_[x]; }
  int end(int x) const { return offsets_[x + 1]; }
  int column(int x, int slot) const { return offsets_[x] + slot; }

  /// Column of (x, action id), if the action is admissible at x.
  std::optional<int> find(int x, int action) const;

 private:
  std::vector<PairRef> pairs_;
  std::vector<int> offsets_{0};
};

/// Finite average-cost MDP with d >= 0 constraint costs.
///
/// Per-pair data (transition rows and costs) is stored column-wise in the
/// order of the pair index. A(x) is kept sorted by action id. The
/// constructor only checks shapes; use validate() for the model invariants.
class FiniteMDP {
 public:
  FiniteMDP() = default;
  FiniteMDP(std::string name, int n_states, std::vector<std::vector<int>> actions,
            std::vector<std::vector<double>> kernel,
            std::vector<std::vector<double>> costs,
            std::vector<double> budgets = {});

  const std::string& name() const { return name_; }
  int n_states() const { return n_states_; }
  const std::vector<std::vector<int>>& actions() const { return actions_; }
  const AdmissiblePairIndex& pairs() const { return index_; }
  std::size_t num_pairs() const { return index_.size(); }

  /// Transition row q(.|x,a) of pair `column`, length n_states().
  const std::vector<double>& row(std::size_t column) const { return kernel_[column]; }
  double q(int y, std::size_t column) const { return kernel_[column][y]; }

  /// Number of constraint costs d; costs are indexed 0..d.
  int num_constraints() const { return static_cast<int>(costs_.size()) - 1; }
  const std::vector<double>& cost(int i) const { return costs_[i]; }
  const std::vector<std::vector<double>>& costs() const { return costs_; }
  const std::vector<double>& budgets() const { return budgets_; }

  /// Copy of this model with the budget vector replaced.
  FiniteMDP with_budgets(std::vector<double> budgets) const;

 private:
  std::string name_;
  int n_states_ = 0;
  std::vector<std::vector<int>> actions_;
  AdmissiblePairIndex index_;
  std::vector<std::vector<double>> kernel_;
  std::vector<std::vector<double>> costs_{{}};
  std::vector<double> budgets_;
};

struct Violation {
  std::string kind;
  int state = -1;
  int action = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

inline constexpr double kRowSumTolerance = 1e-12;

/// Lists every violated model invariant. Never throws.
ValidationReport validate(const FiniteMDP& mdp);

/// Parses an instance document. Throws ParseError on malformed JSON or
/// layout, SemanticError on out-of-range indices or invalid rows.
FiniteMDP load_instance(std::string_view text);
FiniteMDP load_instance_file(const std::string& path);

/// Canonical instance document (sorted keys, zero entries omitted).
std::string save_instance(const FiniteMDP& mdp);

/// Admission-control queue. Action 0 admits the arrival, action 1 rejects
/// it. Cost 0 is holding + rejection cost, cost 1 is the rejection
/// indicator (usable as a constraint cost).
struct QueueFamilySpec {
  double arrival_prob = 0.3;
  double service_prob = 0.6;
  double holding_coeff = 1.0;
  double rejection_cost = 5.0;
  int truncation_level = 10;
};

inline constexpr int kAdmit = 0;
inline constexpr int kReject = 1;

FiniteMDP build_queue_truncation(const QueueFamilySpec& spec);

}  // namespace occmdp

#endif  // OCCMDP_MDP_MODEL_HPP_
