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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using occmdp::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(OCCMDP_DATA_DIR) + "/" + name; }

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "occmdp_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve the two-state cycle") {
  const auto r = call({"solve", "--input", data("two_state_cycle.json"), "--format", "structured"});
  CHECK(r.code == 0);
  const json d = json::parse(r.out);
  CHECK(d.at("value").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("infeasible budgets exit 3") {
  const auto r = call({"solve-constrained", "--input", data("mixing_no_zero_cost.json"), "--kappa", "0"});
  CHECK(r.code == 3);
  CHECK(call({"lex", "--input", data("mixing_no_zero_cost.json")}).code == 3);
}

TEST_CASE("solve then verify, and tamper detection") {
  const fs::path dir = scratch_dir();
  const fs::path sol = dir / "stay_or_go.json";
  REQUIRE(call({"solve", "--input", data("stay_or_go.json"), "--format", "structured", "--out", sol.string()}).code == 0);
  CHECK(call({"verify", "--input", data("stay_or_go.json"), "--solution", sol.string()}).code == 0);

  json d = json::parse(slurp(sol));
  d["gamma"][1]["weight"] = d["gamma"][1]["weight"].get<double>() + 1e-3;
  const fs::path bad = dir / "stay_or_go_tampered.json";
  std::ofstream(bad) << d.dump(2);
  const auto r = call({"verify", "--input", data("stay_or_go.json"), "--solution", bad.string()});
  CHECK(r.code == 4);
  CHECK(r.out.find("balance row") != std::string::npos);
}

TEST_CASE("verify round trip for constrained and lex documents") {
  const fs::path dir = scratch_dir();
  for (const std::string cmd : {"solve-constrained", "lex"}) {
    const fs::path sol = dir / (cmd + ".json");
    REQUIRE(call({cmd, "--input", data("lex_three_action.json"), "--format", "structured", "--out", sol.string()}).code == 0);
    CHECK(call({"verify", "--input", data("lex_three_action.json"), "--solution", sol.string()}).code == 0);
    CHECK(call({"oracle", "--input", data("lex_three_action.json"), "--solution", sol.string()}).code == 0);
  }
}

TEST_CASE("usage errors exit 1") {
  CHECK(call({}).code == 1);
  CHECK(call({"solve"}).code == 1);
  CHECK(call({"frobnicate"}).code == 1);
  CHECK(call({"solve", "--model", "queue", "--format", "yaml"}).code == 1);
  CHECK(call({"verify", "--model", "queue"}).code == 1);
  CHECK(call({"solve-constrained", "--input", data("mixing.json"), "--kappa", "1,2"}).code == 1);
  CHECK(call({"sweep", "--model", "queue"}).code == 1);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("invalid instances exit 2") {
  const fs::path bad = scratch_dir() / "short_row.json";
  std::ofstream(bad) << R"({"n_states": 1, "actions": [[0]], "transitions": [{"x":0,"a":0,"y":0,"p":0.9}], "costs": [[]]})";
  const auto r = call({"solve", "--input", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("row (0,0) sums to 0.9") != std::string::npos);
  CHECK(call({"validate", "--input", (scratch_dir() / "missing.json").string()}).code == 2);
  CHECK(call({"solve", "--model", "queue", "--lambda", "2"}).code == 2);
}

TEST_CASE("sweep matches individual solves") {
  const auto sweep = call({"sweep", "--model", "queue", "--sweep-N", "10,25,50"});
  REQUIRE(sweep.code == 0);
  std::istringstream lines(sweep.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "N,rho");
  for (const std::string n : {"10", "25", "50"}) {
    std::getline(lines, line);
    const auto solo = call({"solve", "--model", "queue", "--N", n, "--format", "structured"});
    const double rho = json::parse(solo.out).at("value").get<double>();
    CHECK(line.substr(0, line.find(',')) == n);
    CHECK(std::stod(line.substr(line.find(',') + 1)) == rho);
  }
  CHECK(call({"sweep", "--model", "queue", "--sweep-N", "10,25,50"}).out == sweep.out);
}

TEST_CASE("simulate reports the generator and is reproducible") {
  const std::vector<std::string> args = {"simulate", "--model", "queue", "--steps", "20000", "--seed", "9",
                                         "--format", "structured"};
  const auto a = call(args);
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out).at("generator") == "splitmix64-counter");
  CHECK(call(args).out == a.out);
}

TEST_CASE("oracle agreement on the queue") {
  const auto r = call({"oracle", "--model", "queue", "--format", "structured"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("ok") == true);
}

}  // TEST_SUITE
