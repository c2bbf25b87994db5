// noise_oracle/noise_matrix.cpp

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

#include "noise_oracle/noise_matrix.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace noise_oracle {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0) || epsilon > 1.0)
    throw InputError("noise level must lie in [0, 1], got " + std::to_string(epsilon));
}

// Divides each row by its sum to absorb the rounding accumulated while
// filling the entries.
void normalize_rows(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).sum();
}

}  // namespace

NoiseMatrix NoiseMatrix::from_rows(Matrix rows) {
  if (auto violation = validate_transition_matrix(rows))
    throw InputError("invalid transition matrix: " + violation->defect);
  return NoiseMatrix(std::move(rows));
}

void FlipSpec::check(Eigen::Index k) const {
  std::set<int> sources;
  for (const auto& [source, target] : mapping) {
    if (source < 0 || source >= k || target < 0 || target >= k)
      throw InputError("flip " + std::to_string(source) + "->" +
                       std::to_string(target) + " out of range for k=" +
                       std::to_string(k));
    if (source == target)
      throw InputError("flip source and target must differ, got " +
                       std::to_string(source));
    if (!sources.insert(source).second)
      throw InputError("duplicate flip source " + std::to_string(source));
  }
}

ClassPrior ClassPrior::from_probs(Vector probs) {
  if (!is_probability_vector(probs))
    throw InputError("class prior must be nonnegative and sum to 1");
  return ClassPrior(std::move(probs));
}

ClassPrior ClassPrior::uniform(Eigen::Index k) {
  if (k < 1) throw InputError("class prior needs k >= 1");
  return ClassPrior(Vector::Constant(k, 1.0 / static_cast<double>(k)));
}

NoiseMatrix uniform_noise(Eigen::Index k, double epsilon) {
  if (k < 2) throw InputError("uniform noise needs k >= 2, got " + std::to_string(k));
  check_epsilon(epsilon);
  Matrix m = Matrix::Constant(k, k, epsilon / static_cast<double>(k - 1));
  m.diagonal().setConstant(1.0 - epsilon);
  normalize_rows(m);
  return NoiseMatrix::from_rows(std::move(m));
}

NoiseMatrix single_flip_noise(Eigen::Index k, double epsilon, const FlipSpec& spec) {
  if (k < 2) throw InputError("single-flip noise needs k >= 2");
  check_epsilon(epsilon);
  spec.check(k);
  Matrix m = Matrix::Identity(k, k);
  for (const auto& [source, target] : spec.mapping) {
    m(source, source) = 1.0 - epsilon;
    m(source, target) = epsilon;
  }
  normalize_rows(m);
  return NoiseMatrix::from_rows(std::move(m));
}

NoiseMatrix multi_flip_mnist(double epsilon) {
  check_epsilon(epsilon);
  const double e = epsilon;
  Matrix m = Matrix::Zero(10, 10);
  m.diagonal().setConstant(1.0 - e);
  m(0, 8) = e / 2;  m(0, 9) = e / 2;
  m(1, 7) = e;
  m(2, 0) = e / 3;  m(2, 3) = 2 * e / 3;
  m(3, 2) = e / 2;  m(3, 8) = e / 2;
  m(4, 0) = e / 5;  m(4, 1) = e / 5;  m(4, 5) = e / 5;  m(4, 6) = e / 5;  m(4, 8) = e / 5;
  m(5, 6) = e / 2;  m(5, 8) = e / 2;
  m(6, 5) = e / 2;  m(6, 8) = e / 2;
  m(7, 1) = 2 * e / 6;  m(7, 4) = e / 6;  m(7, 9) = 3 * e / 6;
  m(8, 2) = 3 * e / 4;  m(8, 9) = e / 4;
  m(9, 0) = e / 3;  m(9, 4) = e / 3;  m(9, 8) = e / 3;
  normalize_rows(m);
  return NoiseMatrix::from_rows(std::move(m));
}

std::vector<int> corrupt_labels(std::span<const int> labels, const NoiseMatrix& m,
                                Rng& rng) {
  std::vector<int> noisy;
  noisy.reserve(labels.size());
  for (const int y : labels) {
    if (y < 0 || y >= m.k())
      throw InputError("label " + std::to_string(y) + " out of range for k=" +
                       std::to_string(m.k()));
    noisy.push_back(static_cast<int>(rng.categorical(m.probs().row(y).transpose())));
  }
  return noisy;
}

Vector compose_noisy_posterior(const Eigen::Ref<const Vector>& clean,
                               const NoiseMatrix& m) {
  if (clean.size() != m.k())
    throw InputError("posterior length " + std::to_string(clean.size()) +
                     " does not match k=" + std::to_string(m.k()));
  return m.probs().transpose() * clean;
}

std::string to_json(const NoiseMatrix& m) {
  nlohmann::json j;
  j["k"] = m.k();
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.k(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.k(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

namespace {

Matrix rows_from_json(const nlohmann::json& j) {
  const auto k = j.at("k").get<Eigen::Index>();
  const auto& rows = j.at("rows");
  if (static_cast<Eigen::Index>(rows.size()) != k)
    throw InputError("matrix JSON: expected " + std::to_string(k) + " rows");
  Matrix m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& row = rows.at(i);
    if (static_cast<Eigen::Index>(row.size()) != k)
      throw InputError("matrix JSON: row " + std::to_string(i) + " has wrong length");
    for (Eigen::Index c = 0; c < k; ++c) m(i, c) = row.at(c).get<double>();
  }
  return m;
}

}  // namespace

NoiseMatrix noise_matrix_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("matrix JSON parse error: ") + e.what());
  }
  try {
    return NoiseMatrix::from_rows(rows_from_json(j));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("matrix JSON: ") + e.what());
  }
}

NoiseMatrix read_noise_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return noise_matrix_from_json(buf.str());
}

void write_noise_matrix(const std::string& path, const NoiseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write matrix file: " + path);
  out << to_json(m) << '\n';
}

}  // namespace noise_oracle
