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

#include "occmdp/documents.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "occmdp/errors.hpp"

namespace occmdp::doc {

namespace {

// Verification thresholds, matching the solver contracts.
constexpr double kPrimalTol = 1e-8;
constexpr double kSignTol = 1e-9;
constexpr double kDualTol = 1e-8;
constexpr double kGapTol = 1e-8;
constexpr double kLexPinTol = 1e-7;

json gamma_json(const FiniteMDP& mdp, const std::vector<double>& gamma) {
  json out = json::array();
  const auto& idx = mdp.pairs();
  for (std::size_t col = 0; col < idx.size(); ++col) {
    out.push_back({{"x", idx[col].state}, {"a", idx[col].action}, {"weight", gamma[col]}});
  }
  return out;
}

json mu_json(const FiniteMDP& mdp, const StationaryPair& pair) {
  json out = json::array();
  const auto& idx = mdp.pairs();
  for (std::size_t col = 0; col < idx.size(); ++col) {
    out.push_back({{"x", idx[col].state}, {"a", idx[col].action}, {"prob", pair.policy[idx[col].state][idx[col].slot]}});
  }
  return out;
}

void put_pair(json& d, const FiniteMDP& mdp, const OccupationMeasure& gamma, const StationaryPair& pair) {
  d["gamma"] = gamma_json(mdp, gamma.gamma);
  d["p"] = pair.dist;
  d["mu"] = mu_json(mdp, pair);
  d["support"] = pair.support;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json acoe_to_json(const AcoeReport& report, const GreedyPolicy& greedy) {
  json rows = json::array();
  for (const auto& r : report.per_state) {
    rows.push_back({{"state", r.state},
                    {"p", r.p},
                    {"h", r.h},
                    {"slack", r.slack},
                    {"randomized_slack", r.randomized_slack},
                    {"argmin_action", r.argmin_action},
                    {"in_absorbing_set", greedy.in_absorbing_set(r.state)}});
  }
  return {{"level", report.level},
          {"inequality_ok", report.inequality_ok},
          {"min_slack", report.min_slack},
          {"equality_states", report.equality_states},
          {"support_covered", report.support_covered},
          {"randomized_ok", report.randomized_ok},
          {"randomized_max_dev", report.randomized_max_dev},
          {"per_state", std::move(rows)},
          {"pair_slack", report.pair_slack},
          {"greedy_policy", {{"action", greedy.action}, {"absorbing_set", greedy.absorbing_set}}}};
}

std::string acoe_csv(const AcoeReport& report, const GreedyPolicy& greedy) {
  std::ostringstream os;
  os << "state,p,h,slack,argmin_action,in_absorbing_set\n";
  for (const auto& r : report.per_state) {
    os << r.state << ',' << format_double(r.p) << ',' << format_double(r.h) << ',' << format_double(r.slack) << ','
       << r.argmin_action << ',' << (greedy.in_absorbing_set(r.state) ? 1 : 0) << '\n';
  }
  return os.str();
}

json solution_to_json(const FiniteMDP& mdp, const UnconstrainedSolution& sol, const AcoeReport& acoe,
                      const GreedyPolicy& greedy) {
  json d;
  d["kind"] = "unconstrained";
  d["instance"] = mdp.name();
  d["status"] = "optimal";
  d["value"] = sol.value;
  put_pair(d, mdp, sol.gamma, sol.pair);
  d["rho"] = sol.cert.rho;
  d["h"] = sol.cert.h;
  d["anchor_state"] = sol.cert.anchor_state;
  const auto res = occupation_residuals(mdp, sol.gamma.gamma);
  d["residuals"] = {{"normalization", res.normalization},
                    {"balance_max", res.balance_max},
                    {"dual_feas_min_slack", dual_min_slack(mdp, sol.cert)},
                    {"gap", std::abs(sol.value - sol.cert.rho)},
                    {"invariance", invariance_residual(sol.pair, mdp)}};
  d["dual_degenerate"] = sol.lp.dual_degenerate;
  d["cost_values"] = cost_vector(mdp, sol.gamma.gamma);
  d["acoe"] = acoe_to_json(acoe, greedy);
  return d;
}

json constrained_to_json(const FiniteMDP& mdp, const ConstrainedSolution& sol, const AcoeReport* acoe,
                         const GreedyPolicy* greedy) {
  json d;
  d["kind"] = "constrained";
  d["instance"] = mdp.name();
  d["status"] = to_string(sol.status);
  d["kappa"] = sol.kappa;
  if (sol.status != SolveStatus::kOptimal) return d;
  d["value"] = sol.value;
  put_pair(d, mdp, sol.gamma, sol.pair);
  d["alpha"] = sol.alpha;
  d["beta"] = sol.cert.beta;
  d["rho"] = sol.cert.rho;
  d["h"] = sol.cert.h;
  d["anchor_state"] = sol.cert.anchor_state;
  d["complementarity"] = complementarity_check(sol);
  d["binding_constraints"] = sol.binding;
  d["dual_degenerate"] = sol.dual_degenerate;
  d["cost_values"] = cost_vector(mdp, sol.gamma.gamma);
  double dual_value = sol.cert.rho;
  for (std::size_t i = 0; i < sol.kappa.size(); ++i) dual_value += sol.cert.beta[i] * sol.kappa[i];
  const auto res = occupation_residuals(mdp, sol.gamma.gamma);
  double budget_max = 0.0;
  const auto costs = cost_vector(mdp, sol.gamma.gamma);
  for (std::size_t i = 0; i < sol.kappa.size(); ++i) {
    budget_max = std::max(budget_max, std::abs(costs[i + 1] + sol.alpha[i] - sol.kappa[i]));
  }
  d["residuals"] = {{"normalization", res.normalization},
                    {"balance_max", res.balance_max},
                    {"budget_max", budget_max},
                    {"dual_feas_min_slack", constrained_dual_min_slack(mdp, sol.cert)},
                    {"gap", std::abs(sol.value - dual_value)},
                    {"invariance", invariance_residual(sol.pair, mdp)}};
  double beta_abs = 0.0;
  for (double b : sol.cert.beta) beta_abs = std::max(beta_abs, std::abs(b));
  d["multiplier_diagnostics"] = {{"binding_constraints", sol.binding}, {"max_abs_beta", beta_abs}};
  if (acoe && greedy) d["acoe"] = acoe_to_json(*acoe, *greedy);
  return d;
}

json lex_to_json(const FiniteMDP& mdp, const LexSolution& sol) {
  json d;
  d["kind"] = "lex";
  d["instance"] = mdp.name();
  d["status"] = to_string(sol.status);
  d["kappa"] = sol.stage0.kappa;
  if (sol.status == LexStatus::kNumericalInfeasible) d["failed_stage"] = sol.failed_stage;
  if (sol.status != LexStatus::kOptimal) return d;
  d["lex_values"] = sol.kappa_star;
  d["lex_eps"] = sol.lex_eps_used;
  d["value"] = sol.kappa_star.front();
  put_pair(d, mdp, sol.gamma, sol.pair);
  d["cost_values"] = cost_vector(mdp, sol.gamma.gamma);
  d["stage0"] = constrained_to_json(mdp, sol.stage0, nullptr, nullptr);
  return d;
}

json simulation_to_json(const SimResult& sim, const std::vector<double>& expected) {
  json d;
  d["kind"] = "simulation";
  d["generator"] = sim.generator;
  d["seed"] = sim.seed;
  d["horizon"] = sim.horizon;
  d["burn_in"] = sim.burn_in;
  d["batches"] = sim.batches;
  d["pathwise_avg"] = sim.pathwise_avg;
  d["stderr"] = sim.stderr_est;
  if (!expected.empty()) {
    d["expected"] = expected;
    json bands = json::array();
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const double band = std::max(3.0 * sim.stderr_est[i], 0.01 * (1.0 + std::abs(expected[i])));
      bands.push_back({{"deviation", std::abs(sim.pathwise_avg[i] - expected[i])}, {"band", band},
                       {"within", std::abs(sim.pathwise_avg[i] - expected[i]) <= band}});
    }
    d["consistency"] = std::move(bands);
  }
  return d;
}

namespace {

template <typename T>
T field(const json& d, const char* key) {
  if (!d.is_object() || !d.contains(key)) throw ParseError(std::string("solution document lacks field '") + key + "'");
  try {
    return d.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("solution field '") + key + "' has the wrong type: " + e.what());
  }
}

}  // namespace

ParsedSolution parse_solution(const json& document, const FiniteMDP& mdp) {
  ParsedSolution out;
  out.kind = field<std::string>(document, "kind");
  if (out.kind != "unconstrained" && out.kind != "constrained" && out.kind != "lex") {
    throw ParseError("unknown solution kind '" + out.kind + "'");
  }
  if (field<std::string>(document, "status") != "optimal") {
    throw SemanticError("solution document has status '" + field<std::string>(document, "status") + "'");
  }
  const int n = mdp.n_states();
  const auto& idx = mdp.pairs();
  out.gamma.gamma.assign(idx.size(), 0.0);
  for (const auto& e : field<json>(document, "gamma")) {
    const auto col = idx.find(field<int>(e, "x"), field<int>(e, "a"));
    if (!col) throw SemanticError("gamma entry references a pair outside the model");
    out.gamma.gamma[*col] = field<double>(e, "weight");
  }
  out.pair.dist = field<std::vector<double>>(document, "p");
  if (static_cast<int>(out.pair.dist.size()) != n) throw SemanticError("p has the wrong length for the model");
  out.pair.policy.resize(n);
  for (int x = 0; x < n; ++x) out.pair.policy[x].assign(mdp.actions()[x].size(), 0.0);
  for (const auto& e : field<json>(document, "mu")) {
    const int x = field<int>(e, "x");
    const auto col = idx.find(x, field<int>(e, "a"));
    if (!col) throw SemanticError("mu entry references a pair outside the model");
    out.pair.policy[x][idx[*col].slot] = field<double>(e, "prob");
  }
  for (int x = 0; x < n; ++x) {
    if (out.pair.dist[x] > kSupportEps) out.pair.support.push_back(x);
  }
  out.value = field<double>(document, "value");

  const json& cert = out.kind == "lex" ? field<json>(document, "stage0") : document;
  out.rho = field<double>(cert, "rho");
  out.h = field<std::vector<double>>(cert, "h");
  if (static_cast<int>(out.h.size()) != n) throw SemanticError("h has the wrong length for the model");
  if (out.kind != "unconstrained") {
    out.kappa = field<std::vector<double>>(cert, "kappa");
    out.alpha = field<std::vector<double>>(cert, "alpha");
    out.beta = field<std::vector<double>>(cert, "beta");
    const auto d = static_cast<std::size_t>(mdp.num_constraints());
    if (out.kappa.size() != d || out.alpha.size() != d || out.beta.size() != d) {
      throw SemanticError("kappa/alpha/beta lengths differ from the model's constraint count");
    }
  }
  if (out.kind == "lex") out.lex_values = field<std::vector<double>>(document, "lex_values");
  return out;
}

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

json verify_to_json(const VerifyReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"ok", c.ok}, {"detail", c.detail}});
  }
  return {{"kind", "verification"}, {"ok", report.ok()}, {"checks", std::move(checks)}};
}

namespace {

class Checker {
 public:
  explicit Checker(std::string prefix) : prefix_(std::move(prefix)) {}

  // Passes when value <= tolerance.
  void at_most(const std::string& name, double value, double tolerance, std::string detail = {}) {
    report.checks.push_back({prefix_ + name, value, tolerance, std::isfinite(value) && value <= tolerance, std::move(detail)});
  }
  void at_least(const std::string& name, double value, double tolerance, std::string detail = {}) {
    report.checks.push_back({prefix_ + name, value, tolerance, std::isfinite(value) && value >= -tolerance, std::move(detail)});
  }
  void flag(const std::string& name, bool ok, std::string detail = {}) {
    report.checks.push_back({prefix_ + name, ok ? 1.0 : 0.0, 1.0, ok, std::move(detail)});
  }

  VerifyReport report;

 private:
  std::string prefix_;
};

void check_occupation(Checker& chk, const FiniteMDP& mdp, const ParsedSolution& s) {
  const int n = mdp.n_states();
  const auto& idx = mdp.pairs();
  const auto res = occupation_residuals(mdp, s.gamma.gamma);
  chk.at_most("normalization", res.normalization, kPrimalTol);
  chk.at_least("nonnegativity", res.min_weight, kSignTol);
  chk.at_most("balance", res.balance_max, kPrimalTol,
              "balance row " + std::to_string(res.balance_argmax) + " residual " + format_double(res.balance_max));

  double marginal = 0.0;
  int marginal_state = 0;
  double rows = 0.0;
  double consistency = 0.0;
  for (int x = 0; x < n; ++x) {
    double px = 0.0;
    double mass = 0.0;
    for (int col = idx.begin(x); col < idx.end(x); ++col) {
      px += s.gamma.gamma[col];
      const double mu = s.pair.policy[x][col - idx.begin(x)];
      mass += mu;
      consistency = std::max(consistency, std::abs(mu * s.pair.dist[x] - s.gamma.gamma[col]));
    }
    if (std::abs(px - s.pair.dist[x]) > marginal) {
      marginal = std::abs(px - s.pair.dist[x]);
      marginal_state = x;
    }
    rows = std::max(rows, std::abs(mass - 1.0));
  }
  chk.at_most("marginal", marginal, kPrimalTol, "state " + std::to_string(marginal_state));
  chk.at_most("policy_rows", rows, kPrimalTol);
  chk.at_most("policy_consistency", consistency, kPrimalTol);
  chk.at_most("invariance", invariance_residual(s.pair, mdp), kPrimalTol);
}

void check_unconstrained(Checker& chk, const FiniteMDP& mdp, const ParsedSolution& s) {
  check_occupation(chk, mdp, s);
  const double value = cost_vector(mdp, s.gamma.gamma)[0];
  chk.at_most("value", std::abs(value - s.value), kGapTol);
  DualCertificate cert{s.rho, s.h, anchor_state(s.pair.dist)};
  chk.at_least("dual_feasibility", dual_min_slack(mdp, cert), kDualTol);
  chk.at_most("duality_gap", std::abs(s.value - s.rho), kGapTol);
  const AcoeReport acoe = acoe_residuals(mdp, cert, s.pair, mdp.cost(0));
  chk.at_least("acoe_inequality", acoe.min_slack, AcoeTolerances{}.inequality);
  chk.flag("acoe_support", acoe.support_covered);
  chk.at_most("acoe_randomized", acoe.randomized_max_dev, AcoeTolerances{}.randomized);
}

void check_constrained(Checker& chk, const FiniteMDP& mdp, const ParsedSolution& s) {
  check_occupation(chk, mdp, s);
  const auto costs = cost_vector(mdp, s.gamma.gamma);
  chk.at_most("value", std::abs(costs[0] - s.value), kGapTol);
  double budget = 0.0;
  int budget_row = 0;
  double alpha_min = std::numeric_limits<double>::infinity();
  double beta_max = -std::numeric_limits<double>::infinity();
  double dual_value = s.rho;
  double comp = 0.0;
  for (std::size_t i = 0; i < s.kappa.size(); ++i) {
    const double r = std::abs(costs[i + 1] + s.alpha[i] - s.kappa[i]);
    if (r > budget) {
      budget = r;
      budget_row = static_cast<int>(i) + 1;
    }
    alpha_min = std::min(alpha_min, s.alpha[i]);
    beta_max = std::max(beta_max, s.beta[i]);
    dual_value += s.beta[i] * s.kappa[i];
    comp += s.alpha[i] * s.beta[i];
  }
  chk.at_most("budget_rows", budget, kPrimalTol, "budget row " + std::to_string(budget_row));
  chk.at_least("slack_sign", alpha_min, kSignTol);
  chk.at_most("multiplier_sign", beta_max, kSignTol);
  ConstrainedDual cert{s.rho, s.h, s.beta, anchor_state(s.pair.dist)};
  chk.at_least("dual_feasibility", constrained_dual_min_slack(mdp, cert), kDualTol);
  chk.at_most("duality_gap", std::abs(s.value - dual_value), kGapTol);
  chk.at_most("complementarity", std::abs(comp), kGapTol);
  const AcoeReport acoe = constrained_acoe_residuals(mdp, cert, s.pair, s.kappa, s.value);
  chk.at_least("acoe_inequality", acoe.min_slack, AcoeTolerances{}.inequality);
  chk.flag("acoe_support", acoe.support_covered);
  chk.at_most("acoe_randomized", acoe.randomized_max_dev, AcoeTolerances{}.randomized);
}

}  // namespace

VerifyReport verify_solution(const FiniteMDP& mdp, const json& document) {
  const ParsedSolution s = parse_solution(document, mdp);
  if (s.kind == "unconstrained") {
    Checker chk("");
    check_unconstrained(chk, mdp, s);
    return chk.report;
  }
  if (s.kind == "constrained") {
    Checker chk("");
    check_constrained(chk, mdp, s);
    return chk.report;
  }

  // Lexicographic: the final measure must be feasible and meet every pin;
  // the stage-0 section is checked as a constrained solution.
  Checker chk("");
  check_occupation(chk, mdp, s);
  const auto costs = cost_vector(mdp, s.gamma.gamma);
  double over_budget = 0.0;
  for (std::size_t i = 0; i < s.kappa.size(); ++i) over_budget = std::max(over_budget, costs[i + 1] - s.kappa[i]);
  chk.at_most("budgets", over_budget, kPrimalTol);
  if (s.lex_values.size() != costs.size()) throw SemanticError("lex_values length differs from d+1");
  double pin = 0.0;
  int pin_index = 0;
  for (std::size_t l = 0; l < costs.size(); ++l) {
    if (std::abs(costs[l] - s.lex_values[l]) > pin) {
      pin = std::abs(costs[l] - s.lex_values[l]);
      pin_index = static_cast<int>(l);
    }
  }
  chk.at_most("lex_pins", pin, kLexPinTol, "stage " + std::to_string(pin_index));

  const ParsedSolution stage0 = parse_solution(document.at("stage0"), mdp);
  Checker sub("stage0.");
  check_constrained(sub, mdp, stage0);
  chk.at_most("stage0_value", std::abs(stage0.value - s.lex_values.front()), kGapTol);
  for (auto& c : sub.report.checks) chk.report.checks.push_back(std::move(c));
  return chk.report;
}

}  // namespace occmdp::doc
