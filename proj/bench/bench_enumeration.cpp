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

// Serial reference versus OpenMP kernels: policy enumeration and the
// truncation sweep.

#include <benchmark/benchmark.h>

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "occmdp/mdp_model.hpp"
#include "occmdp/occupation_lp.hpp"
#include "occmdp/oracles.hpp"

namespace {

occmdp::FiniteMDP queue(int n) {
  occmdp::QueueFamilySpec spec;
  spec.truncation_level = n;
  return occmdp::build_queue_truncation(spec);
}

void BM_BruteForceSerial(benchmark::State& state) {
  const auto mdp = queue(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(occmdp::oracles::brute_force_minimum_value_serial(mdp));
  state.counters["policies"] = static_cast<double>(occmdp::oracles::count_policies(mdp));
}

void BM_BruteForceParallel(benchmark::State& state) {
  const auto mdp = queue(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(occmdp::oracles::brute_force_minimum_value(mdp));
  state.counters["policies"] = static_cast<double>(occmdp::oracles::count_policies(mdp));
}

const std::vector<int> kSweep = {10, 20, 25, 50, 100, 150, 200};

void BM_SweepSerial(benchmark::State& state) {
  for (auto _ : state) {
    for (int n : kSweep) benchmark::DoNotOptimize(occmdp::solve_unconstrained(queue(n)).value);
  }
}

void BM_SweepParallel(benchmark::State& state) {
  const std::vector<std::string> args = {"sweep", "--model", "queue", "--sweep-N", "10,20,25,50,100,150,200"};
  for (auto _ : state) {
    std::ostringstream out;
    std::ostringstream err;
    benchmark::DoNotOptimize(occmdp::cli::run(args, out, err));
  }
}

}  // namespace

BENCHMARK(BM_BruteForceSerial)->Arg(8)->Arg(12)->Arg(15)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForceParallel)->Arg(8)->Arg(12)->Arg(15)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
