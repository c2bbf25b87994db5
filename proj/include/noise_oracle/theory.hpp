// noise_oracle/theory.hpp

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

#ifndef NOISE_ORACLE_THEORY_HPP_
#define NOISE_ORACLE_THEORY_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "noise_oracle/noise_matrix.hpp"
#include "noise_oracle/types.hpp"

namespace noise_oracle {

// Closed-form expected squared error of the transition-matrix estimator.
//
// The estimator is unbiased, so the expected squared Frobenius error equals
// the sum of the per-entry variances. Under fixed per-class sampling,
//
//     Var[est_ij] = M_ij (1 - M_ij) / n_i ,
//
// and under variable (whole-corpus) sampling the 1/n_i factor is replaced by
// the expectation of 1/N_i over the binomial class count N_i, truncated to
// N_i >= 1 (the estimator defines empty rows as zero).

double binomial_pmf(std::int64_t n, double p, std::int64_t x);

// sum_{x=1}^{n} Binom(n, p, x) / x, accumulated smallest-first.
double truncated_reciprocal_expectation(std::int64_t n, double p);

struct ExpectedErrorReport {
  Matrix per_entry_variance;
  double total = 0.0;  // Kahan sum of the entries
  // Classes whose probability of going unsampled exceeds 1e-3 under variable
  // sampling; the truncated closed form visibly deviates from simulation
  // there. Always empty for fixed sampling.
  std::vector<Eigen::Index> high_empty_risk;
};

// Threshold on P(N_i = 0) above which a class is reported as high-risk.
inline constexpr double kEmptyRiskWarnThreshold = 1e-3;

ExpectedErrorReport expected_error_fixed(const NoiseMatrix& m,
                                         const CountVector& per_class);

ExpectedErrorReport expected_error_variable(const NoiseMatrix& m,
                                            const ClassPrior& prior, std::int64_t n);

struct ErrorCurvePoint {
  double grid_value;
  double expected_se;
};

// Expected error as a function of the per-class sample size (fixed sampling,
// the same n_i for every class).
std::vector<ErrorCurvePoint> error_curve_fixed_sizes(
    const NoiseMatrix& m, const std::vector<std::int64_t>& sizes);

// Expected error as a function of the total sample size (variable sampling).
std::vector<ErrorCurvePoint> error_curve_variable_sizes(
    const NoiseMatrix& m, const ClassPrior& prior,
    const std::vector<std::int64_t>& sizes);

// Expected error over a noise-level grid; the matrix is regenerated at every
// epsilon. `size` is n_i for fixed sampling, n for variable (prior given).
std::vector<ErrorCurvePoint> error_curve_noise_levels(
    const std::function<NoiseMatrix(double)>& generator,
    const std::vector<double>& epsilons, std::int64_t size,
    const ClassPrior* variable_prior = nullptr);

// CSV with header grid_value,expected_se.
void write_error_curve_csv(const std::string& path,
                           const std::vector<ErrorCurvePoint>& curve);

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_THEORY_HPP_
