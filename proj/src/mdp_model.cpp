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

#include "occmdp/mdp_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>
#include <utility>

#include <json.hpp>

#include "occmdp/errors.hpp"

namespace occmdp {

using json = nlohmann::json;

AdmissiblePairIndex::AdmissiblePairIndex(const std::vector<std::vector<int>>& actions) {
  offsets_.assign(1, 0);
  for (int x = 0; x < static_cast<int>(actions.size()); ++x) {
    for (int slot = 0; slot < static_cast<int>(actions[x].size()); ++slot) {
      pairs_.push_back({x, slot, actions[x][slot]});
    }
    offsets_.push_back(static_cast<int>(pairs_.size()));
  }
}

std::optional<int> AdmissiblePairIndex::find(int x, int action) const {
  if (x < 0 || x + 1 >= static_cast<int>(offsets_.size())) return std::nullopt;
  for (int col = begin(x); col < end(x); ++col) {
    if (pairs_[col].action == action) return col;
  }
  return std::nullopt;
}

FiniteMDP::FiniteMDP(std::string name, int n_states, std::vector<std::vector<int>> actions,
                     std::vector<std::vector<double>> kernel,
                     std::vector<std::vector<double>> costs, std::vector<double> budgets)
    : name_(std::move(name)), n_states_(n_states), budgets_(std::move(budgets)) {
  if (n_states < 0) throw InvalidArgument("negative state count");
  if (static_cast<int>(actions.size()) != n_states) {
    throw InvalidArgument("actions list has " + std::to_string(actions.size()) +
                          " entries for " + std::to_string(n_states) + " states");
  }
  if (costs.empty()) throw InvalidArgument("at least the objective cost c0 is required");

  std::size_t n_pairs = 0;
  for (const auto& a : actions) n_pairs += a.size();
  if (kernel.size() != n_pairs) throw InvalidArgument("kernel row count differs from |Gamma|");
  for (const auto& r : kernel) {
    if (static_cast<int>(r.size()) != n_states) throw InvalidArgument("kernel row length differs from n_states");
  }
  for (const auto& c : costs) {
    if (c.size() != n_pairs) throw InvalidArgument("cost vector length differs from |Gamma|");
  }

  // Sort A(x) by action id, carrying the per-pair data along.
  std::vector<std::size_t> order;
  order.reserve(n_pairs);
  std::size_t offset = 0;
  for (auto& ax : actions) {
    std::vector<std::size_t> local(ax.size());
    std::iota(local.begin(), local.end(), std::size_t{0});
    std::stable_sort(local.begin(), local.end(),
                     [&](std::size_t l, std::size_t r) { return ax[l] < ax[r]; });
    std::vector<int> sorted;
    for (std::size_t k : local) {
      sorted.push_back(ax[k]);
      order.push_back(offset + k);
    }
    offset += ax.size();
    ax = std::move(sorted);
  }
  kernel_.reserve(n_pairs);
  for (std::size_t k : order) kernel_.push_back(std::move(kernel[k]));
  costs_.clear();
  for (auto& c : costs) {
    std::vector<double> permuted;
    permuted.reserve(n_pairs);
    for (std::size_t k : order) permuted.push_back(c[k]);
    costs_.push_back(std::move(permuted));
  }
  actions_ = std::move(actions);
  index_ = AdmissiblePairIndex(actions_);
}

FiniteMDP FiniteMDP::with_budgets(std::vector<double> budgets) const {
  FiniteMDP copy = *this;
  copy.budgets_ = std::move(budgets);
  return copy;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.message << '\n';
  return os.str();
}

namespace {

constexpr double kRenormalizeFloor = 64 * std::numeric_limits<double>::epsilon();

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

}  // namespace

ValidationReport validate(const FiniteMDP& mdp) {
  ValidationReport report;
  auto add = [&](std::string kind, int x, int a, std::string message) {
    report.violations.push_back({std::move(kind), x, a, std::move(message)});
  };

  if (mdp.n_states() <= 0) add("n_states", -1, -1, "model has no states");

  for (int x = 0; x < mdp.n_states(); ++x) {
    const auto& ax = mdp.actions()[x];
    if (ax.empty()) add("empty_action_set", x, -1, "state " + std::to_string(x) + " has no admissible action");
    for (std::size_t k = 0; k < ax.size(); ++k) {
      if (ax[k] < 0) add("action_id", x, ax[k], "state " + std::to_string(x) + " has negative action id " + std::to_string(ax[k]));
      if (k > 0 && ax[k] == ax[k - 1]) add("duplicate_action", x, ax[k], "state " + std::to_string(x) + " lists action " + std::to_string(ax[k]) + " twice");
    }
  }

  const auto& idx = mdp.pairs();
  for (std::size_t col = 0; col < idx.size(); ++col) {
    const PairRef& pr = idx[col];
    const std::string loc = "(" + std::to_string(pr.state) + "," + std::to_string(pr.action) + ")";
    double sum = 0.0;
    bool entries_ok = true;
    for (int y = 0; y < mdp.n_states(); ++y) {
      const double p = mdp.q(y, col);
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        entries_ok = false;
        add("probability_range", pr.state, pr.action,
            "row " + loc + " has entry q(" + std::to_string(y) + ")=" + fmt_double(p) + " outside [0,1]");
      }
      sum += p;
    }
    if (entries_ok && std::abs(sum - 1.0) > kRowSumTolerance) {
      add("row_sum", pr.state, pr.action, "row " + loc + " sums to " + fmt_double(sum));
    }
    for (int i = 0; i <= mdp.num_constraints(); ++i) {
      const double c = mdp.cost(i)[col];
      if (!std::isfinite(c)) {
        add("cost_finite", pr.state, pr.action, "cost c" + std::to_string(i) + loc + " is not finite");
      } else if (c < 0.0) {
        add("cost_negative", pr.state, pr.action, "cost c" + std::to_string(i) + loc + "=" + fmt_double(c) + " is negative");
      }
    }
  }

  const auto& kappa = mdp.budgets();
  if (!kappa.empty() && static_cast<int>(kappa.size()) != mdp.num_constraints()) {
    add("budget_count", -1, -1,
        "model has " + std::to_string(mdp.num_constraints()) + " constraint costs but " +
            std::to_string(kappa.size()) + " budgets");
  }
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (!std::isfinite(kappa[i]) || kappa[i] < 0.0) {
      add("budget_negative", -1, -1, "budget kappa" + std::to_string(i + 1) + "=" + fmt_double(kappa[i]) + " is not a finite nonnegative number");
    }
  }
  return report;
}

namespace {

template <typename T>
T get_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": field '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

}  // namespace

FiniteMDP load_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance document must be a JSON object");

  const int n = get_field<int>(doc, "n_states", "instance");
  if (n <= 0) throw SemanticError("n_states must be positive");
  auto actions = get_field<std::vector<std::vector<int>>>(doc, "actions", "instance");
  if (static_cast<int>(actions.size()) != n) {
    throw SemanticError("actions has " + std::to_string(actions.size()) + " entries for " + std::to_string(n) + " states");
  }
  for (int x = 0; x < n; ++x) {
    if (actions[x].empty()) throw SemanticError("state " + std::to_string(x) + " has no admissible action");
    std::sort(actions[x].begin(), actions[x].end());
    if (std::adjacent_find(actions[x].begin(), actions[x].end()) != actions[x].end()) {
      throw SemanticError("state " + std::to_string(x) + " lists an action twice");
    }
  }
  const AdmissiblePairIndex idx(actions);

  auto column_of = [&](int x, int a, const std::string& where) {
    if (x < 0 || x >= n) {
      throw SemanticError(where + " references state " + std::to_string(x) + " of a " + std::to_string(n) + "-state model");
    }
    auto col = idx.find(x, a);
    if (!col) {
      throw SemanticError(where + " references action " + std::to_string(a) + " not admissible at state " + std::to_string(x));
    }
    return *col;
  };

  std::vector<std::vector<double>> kernel(idx.size(), std::vector<double>(n, 0.0));
  std::vector<std::vector<bool>> seen(idx.size(), std::vector<bool>(n, false));
  const json& transitions = doc.contains("transitions") ? doc.at("transitions") : json::array();
  if (!transitions.is_array()) throw ParseError("transitions must be a list");
  for (const json& rec : transitions) {
    const int x = get_field<int>(rec, "x", "transition");
    const int a = get_field<int>(rec, "a", "transition");
    const int y = get_field<int>(rec, "y", "transition");
    const double p = get_field<double>(rec, "p", "transition");
    const int col = column_of(x, a, "transition");
    if (y < 0 || y >= n) {
      throw SemanticError("transition references state " + std::to_string(y) + " of a " + std::to_string(n) + "-state model");
    }
    if (seen[col][y]) {
      throw SemanticError("duplicate transition record (" + std::to_string(x) + "," + std::to_string(a) + "," + std::to_string(y) + ")");
    }
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw SemanticError("transition probability " + fmt_double(p) + " outside [0,1]");
    }
    seen[col][y] = true;
    kernel[col][y] = p;
  }
  for (std::size_t col = 0; col < idx.size(); ++col) {
    const double sum = std::accumulate(kernel[col].begin(), kernel[col].end(), 0.0);
    const std::string loc = "(" + std::to_string(idx[col].state) + "," + std::to_string(idx[col].action) + ")";
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw SemanticError("row " + loc + " sums to " + fmt_double(sum));
    }
    // Deviations at summation-rounding level are left alone so that
    // save/load stays a fixed point.
    if (std::abs(sum - 1.0) > kRenormalizeFloor) {
      for (double& p : kernel[col]) p /= sum;
    }
  }

  const json& cost_lists = doc.contains("costs") ? doc.at("costs") : json();
  if (!cost_lists.is_array() || cost_lists.empty()) throw ParseError("costs must be a nonempty list of cost tables");
  std::vector<std::vector<double>> costs;
  for (std::size_t i = 0; i < cost_lists.size(); ++i) {
    const json& table = cost_lists[i];
    if (!table.is_array()) throw ParseError("cost table " + std::to_string(i) + " must be a list");
    std::vector<double> c(idx.size(), 0.0);
    std::vector<bool> c_seen(idx.size(), false);
    for (const json& rec : table) {
      const int x = get_field<int>(rec, "x", "cost entry");
      const int a = get_field<int>(rec, "a", "cost entry");
      const double v = get_field<double>(rec, "value", "cost entry");
      const int col = column_of(x, a, "cost entry");
      if (c_seen[col]) throw SemanticError("duplicate cost entry in table " + std::to_string(i));
      if (!std::isfinite(v) || v < 0.0) throw SemanticError("cost c" + std::to_string(i) + " entry " + fmt_double(v) + " is not a finite nonnegative number");
      c_seen[col] = true;
      c[col] = v;
    }
    costs.push_back(std::move(c));
  }

  std::vector<double> budgets;
  if (doc.contains("budgets") && !doc.at("budgets").is_null()) {
    budgets = get_field<std::vector<double>>(doc, "budgets", "instance");
    if (budgets.size() != costs.size() - 1) {
      throw SemanticError("budgets has " + std::to_string(budgets.size()) + " entries for " + std::to_string(costs.size() - 1) + " constraint costs");
    }
  }
  std::string name;
  if (doc.contains("name")) name = get_field<std::string>(doc, "name", "instance");

  FiniteMDP mdp(std::move(name), n, std::move(actions), std::move(kernel), std::move(costs), std::move(budgets));
  const auto report = validate(mdp);
  if (!report.ok()) throw SemanticError(report.violations.front().message);
  return mdp;
}

FiniteMDP load_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_instance(buf.str());
}

std::string save_instance(const FiniteMDP& mdp) {
  json doc;
  doc["n_states"] = mdp.n_states();
  doc["actions"] = mdp.actions();
  json transitions = json::array();
  const auto& idx = mdp.pairs();
  for (std::size_t col = 0; col < idx.size(); ++col) {
    for (int y = 0; y < mdp.n_states(); ++y) {
      const double p = mdp.q(y, col);
      if (p != 0.0) transitions.push_back({{"x", idx[col].state}, {"a", idx[col].action}, {"y", y}, {"p", p}});
    }
  }
  doc["transitions"] = std::move(transitions);
  json costs = json::array();
  for (int i = 0; i <= mdp.num_constraints(); ++i) {
    json table = json::array();
    for (std::size_t col = 0; col < idx.size(); ++col) {
      const double v = mdp.cost(i)[col];
      if (v != 0.0) table.push_back({{"x", idx[col].state}, {"a", idx[col].action}, {"value", v}});
    }
    costs.push_back(std::move(table));
  }
  doc["costs"] = std::move(costs);
  if (!mdp.budgets().empty()) doc["budgets"] = mdp.budgets();
  if (!mdp.name().empty()) doc["name"] = mdp.name();
  return doc.dump(2) + "\n";
}

FiniteMDP build_queue_truncation(const QueueFamilySpec& spec) {
  const double lambda = spec.arrival_prob;
  const double sigma = spec.service_prob;
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("arrival probability must lie in (0,1)");
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("service probability must lie in (0,1)");
  if (!(spec.holding_coeff > 0.0) || !std::isfinite(spec.holding_coeff)) throw InvalidArgument("holding coefficient must be positive");
  if (!(spec.rejection_cost >= 0.0) || !std::isfinite(spec.rejection_cost)) throw InvalidArgument("rejection cost must be nonnegative");
  if (spec.truncation_level < 1) throw InvalidArgument("truncation level must be at least 1");

  const int top = spec.truncation_level;
  const int n = top + 1;
  std::vector<std::vector<int>> actions(n, std::vector<int>{kAdmit, kReject});
  std::vector<std::vector<double>> kernel;
  std::vector<double> c0, c1;
  for (int x = 0; x < n; ++x) {
    const double serve = x > 0 ? sigma : 0.0;
    for (int a : {kAdmit, kReject}) {
      // Independent arrival and service events within one slot.
      const double up = a == kAdmit ? lambda * (1.0 - serve) : 0.0;
      const double down = a == kAdmit ? serve * (1.0 - lambda) : serve;
      std::vector<double> row(n, 0.0);
      row[std::min(x + 1, top)] += up;
      if (x > 0) row[x - 1] += down;
      row[x] += 1.0 - up - down;
      kernel.push_back(std::move(row));
      c0.push_back(spec.holding_coeff * x + (a == kReject ? spec.rejection_cost : 0.0));
      c1.push_back(a == kReject ? 1.0 : 0.0);
    }
  }
  std::ostringstream name;
  name << "queue(lambda=" << fmt_double(lambda) << ",sigma=" << fmt_double(sigma)
       << ",hc=" << fmt_double(spec.holding_coeff) << ",rc=" << fmt_double(spec.rejection_cost) << ",N=" << top << ")";
  return FiniteMDP(name.str(), n, std::move(actions), std::move(kernel), {std::move(c0), std::move(c1)});
}

}  // namespace occmdp
