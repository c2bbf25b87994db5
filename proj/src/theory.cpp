// noise_oracle/theory.cpp

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

#include "noise_oracle/theory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "noise_oracle/csv.hpp"

namespace noise_oracle {

double binomial_pmf(std::int64_t n, double p, std::int64_t x) {
  if (n < 0 || x < 0 || x > n)
    throw InputError("binomial_pmf: need 0 <= x <= n");
  if (!(p >= 0.0) || p > 1.0)
    throw InputError("binomial_pmf: p must lie in [0, 1]");
  if (p == 0.0) return x == 0 ? 1.0 : 0.0;
  if (p == 1.0) return x == n ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  const double xd = static_cast<double>(x);
  const double log_pmf = std::lgamma(nd + 1.0) - std::lgamma(xd + 1.0) -
                         std::lgamma(nd - xd + 1.0) + xd * std::log(p) +
                         (nd - xd) * std::log1p(-p);
  return std::exp(log_pmf);
}

double truncated_reciprocal_expectation(std::int64_t n, double p) {
  if (n < 1) throw InputError("truncated_reciprocal_expectation: need n >= 1");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (std::int64_t x = 1; x <= n; ++x)
    terms.push_back(binomial_pmf(n, p, x) / static_cast<double>(x));
  std::sort(terms.begin(), terms.end());
  KahanSum sum;
  for (const double t : terms) sum.add(t);
  return sum.value();
}

namespace {

ExpectedErrorReport sum_report(Matrix per_entry) {
  ExpectedErrorReport report;
  KahanSum total;
  for (Eigen::Index i = 0; i < per_entry.rows(); ++i)
    for (Eigen::Index j = 0; j < per_entry.cols(); ++j) total.add(per_entry(i, j));
  report.per_entry_variance = std::move(per_entry);
  report.total = total.value();
  return report;
}

}  // namespace

ExpectedErrorReport expected_error_fixed(const NoiseMatrix& m,
                                         const CountVector& per_class) {
  if (per_class.size() != m.k())
    throw InputError("expected_error_fixed: per-class counts must have length k");
  if ((per_class.array() < 1).any())
    throw InputError("expected_error_fixed: every n_i must be >= 1");
  Matrix var(m.k(), m.k());
  for (Eigen::Index i = 0; i < m.k(); ++i)
    for (Eigen::Index j = 0; j < m.k(); ++j)
      var(i, j) = m(i, j) * (1.0 - m(i, j)) / static_cast<double>(per_class(i));
  return sum_report(std::move(var));
}

ExpectedErrorReport expected_error_variable(const NoiseMatrix& m,
                                            const ClassPrior& prior, std::int64_t n) {
  if (prior.k() != m.k())
    throw InputError("expected_error_variable: prior and matrix disagree on k");
  if (n < 1) throw InputError("expected_error_variable: need n >= 1");
  Matrix var(m.k(), m.k());
  std::vector<Eigen::Index> risky;
  for (Eigen::Index i = 0; i < m.k(); ++i) {
    const double reciprocal = truncated_reciprocal_expectation(n, prior(i));
    const double p_empty =
        std::exp(static_cast<double>(n) * std::log1p(-std::min(prior(i), 1.0)));
    if (p_empty > kEmptyRiskWarnThreshold) risky.push_back(i);
    for (Eigen::Index j = 0; j < m.k(); ++j)
      var(i, j) = m(i, j) * (1.0 - m(i, j)) * reciprocal;
  }
  ExpectedErrorReport report = sum_report(std::move(var));
  report.high_empty_risk = std::move(risky);
  return report;
}

std::vector<ErrorCurvePoint> error_curve_fixed_sizes(
    const NoiseMatrix& m, const std::vector<std::int64_t>& sizes) {
  if (sizes.empty()) throw InputError("error curve needs a nonempty grid");
  std::vector<ErrorCurvePoint> curve;
  for (const auto size : sizes) {
    const CountVector per_class = CountVector::Constant(m.k(), size);
    curve.push_back({static_cast<double>(size),
                     expected_error_fixed(m, per_class).total});
  }
  return curve;
}

std::vector<ErrorCurvePoint> error_curve_variable_sizes(
    const NoiseMatrix& m, const ClassPrior& prior,
    const std::vector<std::int64_t>& sizes) {
  if (sizes.empty()) throw InputError("error curve needs a nonempty grid");
  std::vector<ErrorCurvePoint> curve;
  for (const auto size : sizes)
    curve.push_back({static_cast<double>(size),
                     expected_error_variable(m, prior, size).total});
  return curve;
}

std::vector<ErrorCurvePoint> error_curve_noise_levels(
    const std::function<NoiseMatrix(double)>& generator,
    const std::vector<double>& epsilons, std::int64_t size,
    const ClassPrior* variable_prior) {
  if (epsilons.empty()) throw InputError("error curve needs a nonempty grid");
  std::vector<ErrorCurvePoint> curve;
  for (const double eps : epsilons) {
    const NoiseMatrix m = generator(eps);
    const double total =
        variable_prior
            ? expected_error_variable(m, *variable_prior, size).total
            : expected_error_fixed(m, CountVector::Constant(m.k(), size)).total;
    curve.push_back({eps, total});
  }
  return curve;
}

void write_error_curve_csv(const std::string& path,
                           const std::vector<ErrorCurvePoint>& curve) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write csv file: " + path);
  out << "grid_value,expected_se\n";
  for (const auto& point : curve)
    out << format_double(point.grid_value) << ',' << format_double(point.expected_se)
        << '\n';
}

}  // namespace noise_oracle
