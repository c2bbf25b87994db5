// noise_oracle/rng.cpp

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

#include "noise_oracle/rng.hpp"

#include <cmath>
#include <numbers>

namespace noise_oracle {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index + 1) * 0xD6E8FEB86659FD93ULL);
}

std::int64_t Rng::uniform_index(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("uniform_index: n must be positive");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = (UINT64_MAX / bound) * bound;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<std::int64_t>(x % bound);
}

Eigen::Index Rng::categorical(const Eigen::Ref<const Vector>& probs) {
  const double u = next_double();
  double acc = 0.0;
  Eigen::Index last_positive = -1;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) > 0.0) last_positive = i;
    acc += probs(i);
    if (u < acc) return i;
  }
  if (last_positive < 0)
    throw std::invalid_argument("categorical: distribution has no mass");
  return last_positive;
}

double Rng::next_gaussian() {
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void Rng::shuffle(std::vector<Eigen::Index>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(static_cast<std::int64_t>(i)));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace noise_oracle
