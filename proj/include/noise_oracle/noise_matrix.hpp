// noise_oracle/noise_matrix.hpp

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

#ifndef NOISE_ORACLE_NOISE_MATRIX_HPP_
#define NOISE_ORACLE_NOISE_MATRIX_HPP_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "noise_oracle/rng.hpp"
#include "noise_oracle/types.hpp"

namespace noise_oracle {

// Row-sum tolerance for a valid transition matrix.
inline constexpr double kRowSumTolerance = 1e-9;

struct MatrixViolation {
  Eigen::Index row;
  std::string defect;
};

// Checks row-stochasticity: every entry in [0, 1] and every row summing to 1
// within kRowSumTolerance. Returns the first offending row on failure.
template <typename Derived>
std::optional<MatrixViolation> validate_transition_matrix(
    const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols() || m.rows() < 2)
    return MatrixViolation{-1, "matrix must be square with k >= 2"};
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!(v >= 0.0) || v > 1.0)
        return MatrixViolation{i, "entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") = " +
                                      std::to_string(v) + " outside [0,1]"};
    }
    const double sum = m.row(i).sum();
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      return MatrixViolation{i, "row " + std::to_string(i) + " sums to " +
                                    std::to_string(sum)};
  }
  return std::nullopt;
}

// A k x k row-stochastic label-transition matrix: entry (i, j) is the
// probability that clean class i is observed as noisy class j. Immutable
// after construction and validated on every construction path.
class NoiseMatrix {
 public:
  static NoiseMatrix from_rows(Matrix rows);

  Eigen::Index k() const { return probs_.rows(); }
  const Matrix& probs() const { return probs_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return probs_(i, j); }
  Eigen::Index rows() const { return probs_.rows(); }
  Eigen::Index cols() const { return probs_.cols(); }

 private:
  explicit NoiseMatrix(Matrix probs) : probs_(std::move(probs)) {}
  Matrix probs_;
};

// A flip pattern for single-flip noise: each (source, target) pair sends
// probability mass epsilon from the source class to exactly one other class.
// Sources without an entry stay noise-free.
struct FlipSpec {
  std::vector<std::pair<int, int>> mapping;

  // Throws InputError on out-of-range indices, self-flips or duplicate sources.
  void check(Eigen::Index k) const;
};

// Class distribution P(y).
class ClassPrior {
 public:
  static ClassPrior from_probs(Vector probs);
  static ClassPrior uniform(Eigen::Index k);

  Eigen::Index k() const { return probs_.size(); }
  const Vector& probs() const { return probs_; }
  double operator()(Eigen::Index i) const { return probs_(i); }

 private:
  explicit ClassPrior(Vector probs) : probs_(std::move(probs)) {}
  Vector probs_;
};

// Uniform noise: the clean label survives with probability 1 - epsilon and
// flips to each of the other k-1 classes with probability epsilon / (k - 1).
NoiseMatrix uniform_noise(Eigen::Index k, double epsilon);

// Single-flip noise: each flipped row keeps 1 - epsilon on the diagonal and
// puts epsilon on its designated target class.
NoiseMatrix single_flip_noise(Eigen::Index k, double epsilon, const FlipSpec& spec);

// The 10-class multi-flip pattern modeled on digit confusability, where each
// class spreads epsilon over a hand-picked set of lookalike classes.
NoiseMatrix multi_flip_mnist(double epsilon);

// Corrupts every label independently with one categorical draw from its
// matrix row. Deterministic given the stream.
std::vector<int> corrupt_labels(std::span<const int> labels, const NoiseMatrix& m,
                                Rng& rng);

// Posterior over noisy labels implied by a posterior over clean labels:
// out[j] = sum_i m(i, j) * clean[i].
Vector compose_noisy_posterior(const Eigen::Ref<const Vector>& clean,
                               const NoiseMatrix& m);

// JSON form {"k": int, "rows": [[...], ...]} with shortest-roundtrip floats.
std::string to_json(const NoiseMatrix& m);
NoiseMatrix noise_matrix_from_json(const std::string& text);
NoiseMatrix read_noise_matrix(const std::string& path);
void write_noise_matrix(const std::string& path, const NoiseMatrix& m);

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_NOISE_MATRIX_HPP_
