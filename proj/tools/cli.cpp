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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "occmdp/acoe.hpp"
#include "occmdp/constrained_lp.hpp"
#include "occmdp/documents.hpp"
#include "occmdp/errors.hpp"
#include "occmdp/mdp_model.hpp"
#include "occmdp/occupation_lp.hpp"
#include "occmdp/oracles.hpp"
#include "occmdp/simulation.hpp"

namespace occmdp::cli {

namespace {

using doc::format_double;
using doc::json;

constexpr double kOracleTol = 1e-6;
constexpr double kRviTol = 1e-5;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A command that finished but must report a non-zero status.
class Outcome : public std::runtime_error {
 public:
  Outcome(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct Config {
  std::string command;
  std::string input;
  std::string model;
  QueueFamilySpec queue;
  std::vector<double> kappa;
  lp::ToleranceSet tols;
  std::string format = "human";
  std::string out_path;
  std::vector<int> sweep_n;
  std::string solution_path;
  std::uint64_t seed = 1;
  std::uint64_t steps = 1'000'000;
  std::uint64_t burn_in = 0;
  int start_state = -1;
  std::string trace_path;
  bool verbose = false;
};

std::string num(const json& j) {
  if (j.is_number()) return format_double(j.get<double>());
  if (j.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) s += ' ';
      s += num(j[i]);
    }
    return s;
  }
  return j.dump();
}

FiniteMDP load_model(const Config& c) {
  if (!c.input.empty() && !c.model.empty()) throw UsageError("give either --input or --model, not both");
  if (!c.input.empty()) return load_instance_file(c.input);
  if (c.model == "queue") return build_queue_truncation(c.queue);
  if (c.model.empty()) throw UsageError("an instance is required: --input PATH or --model queue");
  throw UsageError("unknown model '" + c.model + "'");
}

FiniteMDP load_valid_model(const Config& c) {
  FiniteMDP mdp = load_model(c);
  const ValidationReport report = validate(mdp);
  if (!report.ok()) throw SemanticError(report.to_string());
  return mdp;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Outcome(kVerificationFailure, "cannot open solution document " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Outcome(kVerificationFailure, std::string("solution document is not valid JSON: ") + e.what());
  }
}

std::vector<double> resolve_kappa(const Config& c, const FiniteMDP& mdp) {
  const auto d = static_cast<std::size_t>(mdp.num_constraints());
  if (d == 0) throw SemanticError("instance has no constraint costs");
  std::vector<double> kappa = c.kappa.empty() ? mdp.budgets() : c.kappa;
  if (kappa.empty()) throw UsageError("budgets are required: pass --kappa or include them in the instance");
  if (kappa.size() != d) {
    throw UsageError("--kappa has " + std::to_string(kappa.size()) + " entries for " + std::to_string(d) +
                     " constraint costs");
  }
  for (double k : kappa) {
    if (!std::isfinite(k) || k < 0.0) throw UsageError("--kappa entries must be finite and nonnegative");
  }
  return kappa;
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) throw UsageError("cannot write " + c.out_path);
  file << text;
}

std::string structured(const json& d) { return d.dump(2) + "\n"; }

// ---- human renderings ----

std::string human_solution(const json& d) {
  std::ostringstream os;
  os << "instance: " << d.value("instance", std::string()) << '\n';
  os << "kind: " << d.at("kind").get<std::string>() << '\n';
  os << "status: " << d.at("status").get<std::string>() << '\n';
  if (d.contains("kappa")) os << "kappa: " << num(d.at("kappa")) << '\n';
  if (d.at("status") != "optimal") return os.str();
  if (d.contains("lex_values")) os << "lex values: " << num(d.at("lex_values")) << '\n';
  os << "value: " << num(d.at("value")) << '\n';
  if (d.contains("rho")) os << "rho: " << num(d.at("rho")) << '\n';
  if (d.contains("h")) os << "h: " << num(d.at("h")) << '\n';
  if (d.contains("beta")) os << "beta: " << num(d.at("beta")) << '\n';
  if (d.contains("alpha")) os << "alpha: " << num(d.at("alpha")) << '\n';
  os << "cost values: " << num(d.at("cost_values")) << '\n';
  os << "p: " << num(d.at("p")) << '\n';
  os << "policy:\n";
  for (const auto& e : d.at("mu")) {
    if (e.at("prob").get<double>() == 0.0) continue;
    os << "  x=" << e.at("x") << " a=" << e.at("a") << " prob=" << num(e.at("prob")) << '\n';
  }
  if (d.contains("residuals")) {
    os << "residuals:";
    for (const auto& [k, v] : d.at("residuals").items()) os << ' ' << k << '=' << num(v);
    os << '\n';
  }
  if (d.contains("acoe")) {
    const auto& a = d.at("acoe");
    os << "acoe: level=" << num(a.at("level")) << " min_slack=" << num(a.at("min_slack"))
       << " inequality_ok=" << a.at("inequality_ok") << " support_covered=" << a.at("support_covered") << '\n';
    os << "greedy policy: " << a.at("greedy_policy").at("action").dump() << " absorbing set "
       << a.at("greedy_policy").at("absorbing_set").dump() << '\n';
  }
  return os.str();
}

std::string human_verify(const doc::VerifyReport& report) {
  std::ostringstream os;
  for (const auto& c : report.checks) {
    os << (c.ok ? "ok   " : "FAIL ") << c.name << " value=" << format_double(c.value)
       << " tol=" << format_double(c.tolerance);
    if (!c.detail.empty()) os << " (" << c.detail << ')';
    os << '\n';
  }
  os << (report.ok() ? "verification passed\n" : "verification failed\n");
  return os.str();
}

// ---- commands ----

int cmd_validate(const Config& c, std::ostream& out) {
  const FiniteMDP mdp = load_model(c);
  const ValidationReport report = validate(mdp);
  if (c.format == "structured") {
    json v = json::array();
    for (const auto& x : report.violations) {
      v.push_back({{"kind", x.kind}, {"state", x.state}, {"action", x.action}, {"message", x.message}});
    }
    emit(c, structured({{"kind", "validation"}, {"instance", mdp.name()}, {"ok", report.ok()}, {"violations", v}}),
         out);
  } else {
    emit(c, report.ok() ? "instance is valid\n" : report.to_string() + "\n", out);
  }
  return report.ok() ? kSuccess : kInvalidInstance;
}

int cmd_solve(const Config& c, std::ostream& out, std::ostream& err) {
  const FiniteMDP mdp = load_valid_model(c);
  const auto sol = solve_unconstrained(mdp, c.tols, c.verbose ? &err : nullptr);
  const auto acoe = acoe_residuals(mdp, sol.cert, sol.pair, mdp.cost(0));
  const auto greedy = extract_greedy_policy(mdp, sol.cert, sol.pair, mdp.cost(0));
  const json d = doc::solution_to_json(mdp, sol, acoe, greedy);
  if (c.format == "structured") emit(c, structured(d), out);
  else if (c.format == "csv") emit(c, doc::acoe_csv(acoe, greedy), out);
  else emit(c, human_solution(d), out);
  return kSuccess;
}

int cmd_solve_constrained(const Config& c, std::ostream& out, std::ostream& err) {
  const FiniteMDP mdp = load_valid_model(c);
  const auto kappa = resolve_kappa(c, mdp);
  const auto sol = solve_constrained(mdp, kappa, c.tols, c.verbose ? &err : nullptr);
  std::optional<AcoeReport> acoe;
  std::optional<GreedyPolicy> greedy;
  if (sol.status == SolveStatus::kOptimal) {
    acoe = constrained_acoe_residuals(mdp, sol.cert, sol.pair, kappa, sol.value);
    const auto cstar = adjusted_cost(mdp, sol.cert.beta);
    greedy = extract_greedy_policy(mdp, cstar, sol.cert.h, *acoe);
  }
  const json d = doc::constrained_to_json(mdp, sol, acoe ? &*acoe : nullptr, greedy ? &*greedy : nullptr);
  if (c.format == "structured") emit(c, structured(d), out);
  else if (c.format == "csv" && acoe) emit(c, doc::acoe_csv(*acoe, *greedy), out);
  else emit(c, human_solution(d), out);
  if (sol.status != SolveStatus::kOptimal) {
    err << "budgets are infeasible\n";
    return kInfeasibleBudgets;
  }
  return kSuccess;
}

int cmd_lex(const Config& c, std::ostream& out, std::ostream& err) {
  const FiniteMDP mdp = load_valid_model(c);
  const auto kappa = resolve_kappa(c, mdp);
  const auto sol = lex_solve(mdp, kappa, c.tols);
  const json d = doc::lex_to_json(mdp, sol);
  emit(c, c.format == "structured" ? structured(d) : human_solution(d), out);
  if (sol.status == LexStatus::kInfeasible) {
    err << "budgets are infeasible\n";
    return kInfeasibleBudgets;
  }
  if (sol.status == LexStatus::kNumericalInfeasible) {
    err << "lexicographic pins could not be met at stage " << sol.failed_stage << '\n';
    return kInternalInconsistency;
  }
  return kSuccess;
}

int cmd_verify(const Config& c, std::ostream& out) {
  if (c.solution_path.empty()) throw UsageError("verify requires --solution PATH");
  const FiniteMDP mdp = load_valid_model(c);
  const json document = read_json_file(c.solution_path);
  doc::VerifyReport report;
  try {
    report = doc::verify_solution(mdp, document);
  } catch (const ParseError& e) {
    throw Outcome(kVerificationFailure, e.what());
  } catch (const SemanticError& e) {
    throw Outcome(kVerificationFailure, e.what());
  } catch (const json::exception& e) {
    throw Outcome(kVerificationFailure, e.what());
  }
  emit(c, c.format == "structured" ? structured(doc::verify_to_json(report)) : human_verify(report), out);
  return report.ok() ? kSuccess : kVerificationFailure;
}

/// Pair to simulate: from --solution if given, else a fresh solve.
StationaryPair pair_for(const Config& c, const FiniteMDP& mdp) {
  if (!c.solution_path.empty()) {
    const json document = read_json_file(c.solution_path);
    try {
      return doc::parse_solution(document, mdp).pair;
    } catch (const json::exception& e) {
      throw ParseError(e.what());
    }
  }
  if (!c.kappa.empty()) {
    const auto sol = solve_constrained(mdp, resolve_kappa(c, mdp), c.tols);
    if (sol.status != SolveStatus::kOptimal) throw Outcome(kInfeasibleBudgets, "budgets are infeasible");
    return sol.pair;
  }
  return solve_unconstrained(mdp, c.tols).pair;
}

int cmd_simulate(const Config& c, std::ostream& out) {
  const FiniteMDP mdp = load_valid_model(c);
  const StationaryPair pair = pair_for(c, mdp);
  SimOptions opts;
  opts.steps = c.steps;
  opts.seed = c.seed;
  opts.burn_in = c.burn_in;
  if (c.start_state >= 0) opts.start_state = c.start_state;
  std::ofstream trace;
  if (!c.trace_path.empty()) {
    trace.open(c.trace_path, std::ios::binary);
    if (!trace) throw UsageError("cannot write " + c.trace_path);
    opts.trace = &trace;
  }
  const SimResult sim = simulate(mdp, pair, opts);
  std::vector<double> expected;
  for (int i = 0; i <= mdp.num_constraints(); ++i) expected.push_back(average_cost(pair, mdp, i));
  const json d = doc::simulation_to_json(sim, expected);
  if (c.format == "structured") {
    emit(c, structured(d), out);
  } else if (c.format == "csv") {
    std::ostringstream os;
    os << "cost,pathwise_avg,stderr,expected\n";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      os << i << ',' << format_double(sim.pathwise_avg[i]) << ',' << format_double(sim.stderr_est[i]) << ','
         << format_double(expected[i]) << '\n';
    }
    emit(c, os.str(), out);
  } else {
    std::ostringstream os;
    os << "generator: " << sim.generator << " seed " << sim.seed << '\n';
    os << "horizon: " << sim.horizon << " burn-in " << sim.burn_in << '\n';
    for (std::size_t i = 0; i < expected.size(); ++i) {
      os << "c" << i << ": pathwise " << format_double(sim.pathwise_avg[i]) << " stderr "
         << format_double(sim.stderr_est[i]) << " expected " << format_double(expected[i]) << '\n';
    }
    emit(c, os.str(), out);
  }
  return kSuccess;
}

int cmd_sweep(const Config& c, std::ostream& out) {
  if (c.sweep_n.empty()) throw UsageError("sweep requires --sweep-N n1,n2,...");
  if (!c.input.empty() || (!c.model.empty() && c.model != "queue")) throw UsageError("sweep runs on --model queue only");
  const auto count = static_cast<int>(c.sweep_n.size());
  std::vector<double> rho(count, 0.0);
  std::vector<std::exception_ptr> failure(count);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < count; ++k) {
    try {
      QueueFamilySpec spec = c.queue;
      spec.truncation_level = c.sweep_n[k];
      rho[k] = solve_unconstrained(build_queue_truncation(spec), c.tols).value;
    } catch (...) {
      failure[k] = std::current_exception();
    }
  }
  for (const auto& f : failure) {
    if (f) std::rethrow_exception(f);
  }
  if (c.format == "structured") {
    json rows = json::array();
    for (int k = 0; k < count; ++k) rows.push_back({{"N", c.sweep_n[k]}, {"rho", rho[k]}});
    emit(c,
         structured({{"kind", "sweep"},
                     {"model", {{"lambda", c.queue.arrival_prob}, {"sigma", c.queue.service_prob},
                                {"hc", c.queue.holding_coeff}, {"rc", c.queue.rejection_cost}}},
                     {"rows", rows}}),
         out);
  } else {
    std::ostringstream os;
    os << "N,rho\n";
    for (int k = 0; k < count; ++k) os << c.sweep_n[k] << ',' << format_double(rho[k]) << '\n';
    emit(c, os.str(), out);
  }
  return kSuccess;
}

int cmd_oracle(const Config& c, std::ostream& out) {
  const FiniteMDP mdp = load_valid_model(c);
  std::optional<json> document;
  if (!c.solution_path.empty()) document = read_json_file(c.solution_path);
  const std::string kind = document ? document->value("kind", std::string("unconstrained"))
                                    : (c.kappa.empty() && mdp.budgets().empty() ? "unconstrained" : "constrained");
  json report = {{"kind", "oracle"}, {"instance", mdp.name()}, {"mode", kind == "unconstrained" ? "unconstrained" : "constrained"}};
  bool ok = true;

  if (kind == "unconstrained") {
    double lp_value = 0.0;
    if (document) {
      try {
        lp_value = doc::parse_solution(*document, mdp).value;
      } catch (const json::exception& e) {
        throw Outcome(kVerificationFailure, e.what());
      }
    } else {
      lp_value = solve_unconstrained(mdp, c.tols).value;
    }
    const auto bf = oracles::brute_force_minimum_value(mdp);
    const double diff = std::abs(lp_value - bf.value);
    ok = diff <= kOracleTol;
    report["lp_value"] = lp_value;
    report["brute_force"] = {{"value", bf.value}, {"policy", bf.policy}, {"witness_class", bf.witness_class},
                             {"policies", bf.policies}, {"difference", diff}, {"ok", diff <= kOracleTol}};
    try {
      const auto rvi = oracles::relative_value_iteration(mdp);
      const double rdiff = std::abs(lp_value - rvi.rho);
      ok = ok && rdiff <= kRviTol;
      report["rvi"] = {{"status", "converged"}, {"rho", rvi.rho}, {"iterations", rvi.iterations},
                       {"final_span", rvi.final_span}, {"difference", rdiff}, {"ok", rdiff <= kRviTol}};
    } catch (const MultichainRefusal& e) {
      report["rvi"] = {{"status", "refused_multichain"}, {"message", e.what()}};
    } catch (const NonConvergence& e) {
      report["rvi"] = {{"status", "nonconvergence"}, {"final_span", e.final_span()}};
    }
  } else {
    std::vector<double> kappa;
    std::string lp_status;
    double lp_value = 0.0;
    if (document) {
      try {
        kappa = document->at("kappa").get<std::vector<double>>();
        lp_status = document->at("status").get<std::string>();
        if (lp_status == "optimal") lp_value = document->at("value").get<double>();
      } catch (const json::exception& e) {
        throw Outcome(kVerificationFailure, e.what());
      }
    } else {
      kappa = resolve_kappa(c, mdp);
      const auto sol = solve_constrained(mdp, kappa, c.tols);
      lp_status = to_string(sol.status);
      lp_value = sol.value;
    }
    const auto bf = oracles::brute_force_constrained_value(mdp, kappa);
    const std::string bf_status = bf.status == lp::Status::kOptimal ? "optimal" : "infeasible";
    report["kappa"] = kappa;
    report["lp_status"] = lp_status;
    report["brute_force"] = {{"status", bf_status}};
    ok = lp_status == bf_status;
    if (ok && bf_status == "optimal") {
      const double diff = std::abs(lp_value - bf.value);
      report["lp_value"] = lp_value;
      report["brute_force"]["value"] = bf.value;
      report["brute_force"]["difference"] = diff;
      ok = diff <= kOracleTol;
    }
  }
  report["ok"] = ok;

  if (c.format == "structured") {
    emit(c, structured(report), out);
  } else {
    std::ostringstream os;
    os << "mode: " << report.at("mode").get<std::string>() << '\n';
    if (report.contains("lp_status")) os << "lp status: " << report.at("lp_status").get<std::string>() << '\n';
    if (report.contains("lp_value")) os << "lp value: " << num(report.at("lp_value")) << '\n';
    for (const char* key : {"brute_force", "rvi"}) {
      if (!report.contains(key)) continue;
      os << key << ':';
      for (const auto& [k, v] : report.at(key).items()) os << ' ' << k << '=' << (v.is_number_float() ? num(v) : v.dump());
      os << '\n';
    }
    os << (ok ? "oracles agree\n" : "oracles disagree\n");
    emit(c, os.str(), out);
  }
  return ok ? kSuccess : kVerificationFailure;
}

int dispatch(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.command == "validate") return cmd_validate(c, out);
  if (c.command == "solve") return cmd_solve(c, out, err);
  if (c.command == "solve-constrained") return cmd_solve_constrained(c, out, err);
  if (c.command == "lex") return cmd_lex(c, out, err);
  if (c.command == "verify") return cmd_verify(c, out);
  if (c.command == "simulate") return cmd_simulate(c, out);
  if (c.command == "sweep") return cmd_sweep(c, out);
  if (c.command == "oracle") return cmd_oracle(c, out);
  throw UsageError("unknown command " + c.command);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Average-cost MDP solver based on occupation-measure linear programs", "occmdp"};
  app.require_subcommand(1);

  app.add_option("--input", c.input, "Instance document (JSON)");
  app.add_option("--model", c.model, "Built-in model family")->check(CLI::IsMember({"queue"}));
  app.add_option("--lambda", c.queue.arrival_prob, "Queue arrival probability");
  app.add_option("--sigma", c.queue.service_prob, "Queue service probability");
  app.add_option("--hc", c.queue.holding_coeff, "Queue holding cost coefficient");
  app.add_option("--rc", c.queue.rejection_cost, "Queue rejection cost");
  app.add_option("--N", c.queue.truncation_level, "Queue truncation level");
  app.add_option("--kappa", c.kappa, "Budgets v1,v2,...")->delimiter(',');
  app.add_option("--tol-feas", c.tols.feas, "Primal feasibility tolerance");
  app.add_option("--tol-opt", c.tols.opt, "Reduced-cost tolerance");
  app.add_option("--tol-gap", c.tols.gap, "Duality gap tolerance");
  app.add_option("--seed", c.seed, "Simulation seed");
  app.add_option("--steps", c.steps, "Simulation horizon");
  app.add_option("--burn-in", c.burn_in, "Simulation steps discarded before averaging");
  app.add_option("--start-state", c.start_state, "Fixed initial state instead of a draw from p");
  app.add_option("--trace", c.trace_path, "CSV trace of the simulated path");
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"human", "structured", "csv"}));
  app.add_option("--out", c.out_path, "Write the document here instead of stdout");
  app.add_option("--sweep-N", c.sweep_n, "Truncation levels n1,n2,...")->delimiter(',');
  app.add_option("--solution", c.solution_path, "Solution document to verify, simulate or check");
  app.add_flag("--verbose,-v", c.verbose, "Trace simplex pivots to stderr");

  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"validate", "Check an instance against the model invariants"},
           {"solve", "Solve the unconstrained average-cost problem"},
           {"solve-constrained", "Solve the budget-constrained problem"},
           {"lex", "Lexicographic solve over c0, c1, ..., cd"},
           {"verify", "Re-check a solution document without solving"},
           {"simulate", "Simulate the chain of a stationary pair"},
           {"sweep", "Queue truncation sweep, emits N,rho"},
           {"oracle", "Compare the LP against brute-force and value-iteration oracles"}}) {
    app.add_subcommand(name, help)->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    return dispatch(c, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Outcome& e) {
    err << e.what() << '\n';
    return e.code();
  } catch (const EnumerationGuardExceeded& e) {
    err << "oracle refused: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "invalid instance: " << e.what() << '\n';
    return kInvalidInstance;
  } catch (const SemanticError& e) {
    err << "invalid instance: " << e.what() << '\n';
    return kInvalidInstance;
  } catch (const InvalidArgument& e) {
    err << "invalid instance: " << e.what() << '\n';
    return kInvalidInstance;
  } catch (const std::exception& e) {
    err << "internal inconsistency: " << e.what() << '\n';
    return kInternalInconsistency;
  }
}

}  // namespace occmdp::cli
