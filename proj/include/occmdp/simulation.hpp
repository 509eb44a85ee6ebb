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

#ifndef OCCMDP_SIMULATION_HPP_
#define OCCMDP_SIMULATION_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occmdp/mdp_model.hpp"
#include "occmdp/occupation_lp.hpp"

namespace occmdp {

/// Counter-based SplitMix64. Draw k is the (k+1)-th output of the
/// SplitMix64 sequence started at `seed`:
///   z = seed + (k+1) * 0x9E3779B97F4A7C15
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z =  z ^ (z >> 31)
/// and the uniform variate is (z >> 11) * 2^-53 in [0, 1).
class CounterRng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-counter";

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;

 private:
  std::uint64_t seed_;
};

/// Index i with cum(i-1) <= u < cum(i); rounding overflow lands on the
/// last positive entry.
int sample_inverse_cdf(std::span<const double> probs, double u);

struct SimOptions {
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  /// Steps simulated before averaging starts.
  std::uint64_t burn_in = 0;
  /// Fixed initial state instead of a draw from p.
  std::optional<int> start_state;
  int batches = 100;
  /// CSV trace (step,state,action,c0..cd) of the averaged steps.
  std::ostream* trace = nullptr;
};

struct SimResult {
  std::uint64_t horizon = 0;
  std::uint64_t burn_in = 0;
  std::vector<double> pathwise_avg;
  std::vector<double> stderr_est;
  std::uint64_t seed = 0;
  std::string generator = CounterRng::kAlgorithm;
  int batches = 0;
};

/// Draw order: counter 0 picks x0 from p; step t uses counter 2t+1 for the
/// action and 2t+2 for the next state. Identical inputs give identical
/// results. Throws InvalidArgument on steps == 0 or an empty support.
SimResult simulate(const FiniteMDP& mdp, const StationaryPair& pair, const SimOptions& options);

}  // namespace occmdp

#endif  // OCCMDP_SIMULATION_HPP_
