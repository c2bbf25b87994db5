// noise_oracle/label_pairs.hpp

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

#ifndef NOISE_ORACLE_LABEL_PAIRS_HPP_
#define NOISE_ORACLE_LABEL_PAIRS_HPP_

#include <span>
#include <string>
#include <vector>

#include "noise_oracle/rng.hpp"
#include "noise_oracle/types.hpp"

namespace noise_oracle {

// One observed (clean, noisy) label pair.
struct LabelPair {
  int clean;
  int noisy;
  friend bool operator==(const LabelPair&, const LabelPair&) = default;
};

// Multiset of pairs over k classes, the raw material of the estimator.
struct LabelPairSet {
  Eigen::Index k = 0;
  std::vector<LabelPair> pairs;

  void check() const;  // throws InputError on out-of-range labels
};

struct PairCounts {
  CountMatrix transitions;  // (i, j): pairs with clean == i, noisy == j
  CountVector per_class;    // i: pairs with clean == i (row sum)
};

PairCounts count_matrix(const LabelPairSet& s);

// Row-normalized transition counts. Rows whose class never appears are left
// all-zero and flagged rather than renormalized; the matrix may therefore
// violate row-stochasticity and is returned as a plain matrix.
struct NoiseEstimate {
  Matrix probs;
  std::vector<Eigen::Index> empty_rows;  // ascending

  bool has_empty_rows() const { return !empty_rows.empty(); }
};

NoiseEstimate estimate_noise_matrix(const LabelPairSet& s);

// Squared Frobenius distance between two equally sized matrices.
template <typename DerivedA, typename DerivedB>
double squared_error(const Eigen::MatrixBase<DerivedA>& reference,
                     const Eigen::MatrixBase<DerivedB>& estimate) {
  if (reference.rows() != estimate.rows() || reference.cols() != estimate.cols())
    throw InputError("squared_error: dimension mismatch");
  return (reference - estimate).squaredNorm();
}

enum class Replacement { kWith, kWithout };

// Draws per_class[i] indices among positions whose clean label is i,
// uniformly at random. Without-replacement draws reject counts exceeding the
// available population of a class.
std::vector<Eigen::Index> sample_fixed_indices(std::span<const int> clean_labels,
                                               const CountVector& per_class,
                                               Rng& rng,
                                               Replacement mode = Replacement::kWith);

// Draws n indices uniformly from [0, population_size).
std::vector<Eigen::Index> sample_variable_indices(Eigen::Index population_size,
                                                  std::int64_t n, Rng& rng,
                                                  Replacement mode = Replacement::kWith);

// Per-class sampling of pairs from a population pair set.
LabelPairSet fixed_sample(const LabelPairSet& population, const CountVector& per_class,
                          Rng& rng, Replacement mode = Replacement::kWith);

// Whole-population sampling of n pairs; per-class counts come out random.
LabelPairSet variable_sample(const LabelPairSet& population, std::int64_t n, Rng& rng,
                             Replacement mode = Replacement::kWith);

// TSV with two integer columns clean<TAB>noisy, one pair per line; a
// "clean\tnoisy" header line is accepted and skipped.
LabelPairSet read_pairs_tsv(const std::string& path, Eigen::Index k);
void write_pairs_tsv(const std::string& path, const LabelPairSet& s);

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_LABEL_PAIRS_HPP_
