// noise_oracle/rng.hpp

// Copyright 2026 The noise-oracle Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NOISE_ORACLE_RNG_HPP_
#define NOISE_ORACLE_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "noise_oracle/types.hpp"

namespace noise_oracle {

// SplitMix64 finalizer; used both to scramble user seeds and to derive
// counter-based child seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Child seed for stream `index` under `master`. Repetition r of a simulation
// always uses child_seed(master, r) no matter which worker runs it, so the
// schedule cannot perturb results.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index);

// Seeded random stream. Every stochastic operation in the library takes one
// of these explicitly; there is no global randomness. Draw primitives are
// implemented here (not via std distributions, whose outputs are
// implementation-defined) so that equal seeds give equal results everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform index in [0, n). Rejection sampling keeps it unbiased.
  std::int64_t uniform_index(std::int64_t n);

  // Index drawn from the categorical distribution given by `probs`
  // (nonnegative, summing to ~1). Ties from accumulated rounding fall to the
  // last class with positive mass.
  Eigen::Index categorical(const Eigen::Ref<const Vector>& probs);

  // Standard normal via Box-Muller (two uniforms per call, no cached spare,
  // so the draw count per call is fixed).
  double next_gaussian();

  // Fisher-Yates shuffle of an index vector.
  void shuffle(std::vector<Eigen::Index>& items);

 private:
  std::mt19937_64 engine_;
};

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_RNG_HPP_
