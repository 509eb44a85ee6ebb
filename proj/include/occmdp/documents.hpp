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

// Solution and report documents. Objects are emitted with sorted keys, so
// identical inputs produce byte-identical documents.

#ifndef OCCMDP_DOCUMENTS_HPP_
#define OCCMDP_DOCUMENTS_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "occmdp/acoe.hpp"
#include "occmdp/constrained_lp.hpp"
#include "occmdp/mdp_model.hpp"
#include "occmdp/occupation_lp.hpp"
#include "occmdp/simulation.hpp"

namespace occmdp::doc {

using json = nlohmann::json;

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

json acoe_to_json(const AcoeReport& report, const GreedyPolicy& greedy);

/// Per-state table: state,p,h,slack,argmin_action,in_absorbing_set.
std::string acoe_csv(const AcoeReport& report, const GreedyPolicy& greedy);

json solution_to_json(const FiniteMDP& mdp, const UnconstrainedSolution& sol, const AcoeReport& acoe,
                      const GreedyPolicy& greedy);

json constrained_to_json(const FiniteMDP& mdp, const ConstrainedSolution& sol, const AcoeReport* acoe,
                         const GreedyPolicy* greedy);

json lex_to_json(const FiniteMDP& mdp, const LexSolution& sol);

json simulation_to_json(const SimResult& sim, const std::vector<double>& expected);

/// Fields of a solution document needed to re-check it.
struct ParsedSolution {
  std::string kind;
  OccupationMeasure gamma;
  StationaryPair pair;
  double value = 0.0;
  double rho = 0.0;
  std::vector<double> h;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> kappa;
  std::vector<double> lex_values;
};

/// Reads gamma, p, mu and the certificate. For lex documents the
/// certificate comes from the stage-0 section. Throws ParseError or
/// SemanticError when the document does not match the model.
ParsedSolution parse_solution(const json& document, const FiniteMDP& mdp);

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool ok = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool ok() const;
};

json verify_to_json(const VerifyReport& report);

/// Re-checks every invariant of a solution document against its model
/// without solving anything.
VerifyReport verify_solution(const FiniteMDP& mdp, const json& document);

}  // namespace occmdp::doc

#endif  // OCCMDP_DOCUMENTS_HPP_
