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

#include "occmdp/simulation.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "occmdp/errors.hpp"

namespace occmdp {

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

int sample_inverse_cdf(std::span<const double> probs, double u) {
  double cum = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    cum += probs[i];
    if (u < cum) return last_positive;
  }
  if (last_positive < 0) throw InvalidArgument("cannot sample from an all-zero distribution");
  return last_positive;
}

SimResult simulate(const FiniteMDP& mdp, const StationaryPair& pair, const SimOptions& options) {
  if (options.steps == 0) throw InvalidArgument("simulation horizon must be at least one step");
  if (options.batches < 1) throw InvalidArgument("batch count must be positive");
  const int n = mdp.n_states();
  const int d = mdp.num_constraints();
  const auto& idx = mdp.pairs();
  if (static_cast<int>(pair.dist.size()) != n || static_cast<int>(pair.policy.size()) != n) {
    throw InvalidArgument("stationary pair does not match the model");
  }
  if (std::accumulate(pair.dist.begin(), pair.dist.end(), 0.0) <= 0.0 && !options.start_state) {
    throw InvalidArgument("stationary pair has empty support");
  }

  const CounterRng rng(options.seed);
  int x = 0;
  if (options.start_state) {
    x = *options.start_state;
    if (x < 0 || x >= n) throw InvalidArgument("start state out of range");
  } else {
    x = sample_inverse_cdf(pair.dist, rng.uniform(0));
  }

  const std::uint64_t total = options.burn_in + options.steps;
  const auto batches = static_cast<std::uint64_t>(std::min<std::uint64_t>(options.batches, options.steps));
  std::vector<double> sums(d + 1, 0.0);
  std::vector<std::vector<double>> batch_sums(d + 1, std::vector<double>(batches, 0.0));
  std::uint64_t batch = 0;
  std::uint64_t batch_end = options.steps / batches;

  if (options.trace) {
    *options.trace << "step,state,action";
    for (int i = 0; i <= d; ++i) *options.trace << ",c" << i;
    *options.trace << '\n';
  }

  for (std::uint64_t t = 0; t < total; ++t) {
    const int slot = sample_inverse_cdf(pair.policy[x], rng.uniform(2 * t + 1));
    const int col = idx.column(x, slot);
    if (t >= options.burn_in) {
      const std::uint64_t k = t - options.burn_in;
      while (k >= batch_end) {
        ++batch;
        batch_end = (batch + 1) * options.steps / batches;
      }
      for (int i = 0; i <= d; ++i) {
        const double c = mdp.cost(i)[col];
        sums[i] += c;
        batch_sums[i][batch] += c;
      }
      if (options.trace) {
        *options.trace << k << ',' << x << ',' << idx[col].action;
        for (int i = 0; i <= d; ++i) *options.trace << ',' << mdp.cost(i)[col];
        *options.trace << '\n';
      }
    }
    x = sample_inverse_cdf(mdp.row(col), rng.uniform(2 * t + 2));
  }

  SimResult out;
  out.horizon = options.steps;
  out.burn_in = options.burn_in;
  out.seed = options.seed;
  out.batches = static_cast<int>(batches);
  for (int i = 0; i <= d; ++i) {
    out.pathwise_avg.push_back(sums[i] / static_cast<double>(options.steps));
    double se = 0.0;
    if (batches >= 2) {
      std::vector<double> means(batches);
      for (std::uint64_t b = 0; b < batches; ++b) {
        const std::uint64_t len = (b + 1) * options.steps / batches - b * options.steps / batches;
        means[b] = batch_sums[i][b] / static_cast<double>(len);
      }
      const double mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(batches);
      double ss = 0.0;
      for (double m : means) ss += (m - mean) * (m - mean);
      se = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
    }
    out.stderr_est.push_back(se);
  }
  return out;
}

}  // namespace occmdp
