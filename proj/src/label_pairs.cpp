// noise_oracle/label_pairs.cpp

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

#include "noise_oracle/label_pairs.hpp"

#include <charconv>
#include <fstream>

namespace noise_oracle {

void LabelPairSet::check() const {
  if (k < 2) throw InputError("label pair set needs k >= 2");
  for (const auto& p : pairs) {
    if (p.clean < 0 || p.clean >= k || p.noisy < 0 || p.noisy >= k)
      throw InputError("label pair (" + std::to_string(p.clean) + "," +
                       std::to_string(p.noisy) + ") out of range for k=" +
                       std::to_string(k));
  }
}

PairCounts count_matrix(const LabelPairSet& s) {
  s.check();
  PairCounts counts{CountMatrix::Zero(s.k, s.k), CountVector::Zero(s.k)};
  for (const auto& p : s.pairs) ++counts.transitions(p.clean, p.noisy);
  counts.per_class = counts.transitions.rowwise().sum();
  return counts;
}

NoiseEstimate estimate_noise_matrix(const LabelPairSet& s) {
  const PairCounts counts = count_matrix(s);
  NoiseEstimate est{Matrix::Zero(s.k, s.k), {}};
  for (Eigen::Index i = 0; i < s.k; ++i) {
    if (counts.per_class(i) == 0) {
      est.empty_rows.push_back(i);  // row stays all-zero
      continue;
    }
    est.probs.row(i) = counts.transitions.row(i).cast<double>() /
                       static_cast<double>(counts.per_class(i));
  }
  return est;
}

namespace {

// Floyd's algorithm: a uniform m-subset of [0, population) without building
// the whole index range. The subset is then order-shuffled by emission.
std::vector<Eigen::Index> sample_without_replacement(std::span<const Eigen::Index> pool,
                                                     std::int64_t m, Rng& rng) {
  std::vector<Eigen::Index> picked;
  picked.reserve(static_cast<std::size_t>(m));
  std::vector<bool> taken(pool.size(), false);
  const auto n = static_cast<std::int64_t>(pool.size());
  for (std::int64_t j = n - m; j < n; ++j) {
    const auto t = rng.uniform_index(j + 1);
    if (taken[static_cast<std::size_t>(t)]) {
      taken[static_cast<std::size_t>(j)] = true;
      picked.push_back(pool[static_cast<std::size_t>(j)]);
    } else {
      taken[static_cast<std::size_t>(t)] = true;
      picked.push_back(pool[static_cast<std::size_t>(t)]);
    }
  }
  return picked;
}

}  // namespace

std::vector<Eigen::Index> sample_fixed_indices(std::span<const int> clean_labels,
                                               const CountVector& per_class, Rng& rng,
                                               Replacement mode) {
  const Eigen::Index k = per_class.size();
  if ((per_class.array() < 0).any())
    throw InputError("per-class sample counts must be nonnegative");
  std::vector<std::vector<Eigen::Index>> by_class(static_cast<std::size_t>(k));
  for (std::size_t t = 0; t < clean_labels.size(); ++t) {
    const int y = clean_labels[t];
    if (y < 0 || y >= k)
      throw InputError("clean label " + std::to_string(y) + " out of range");
    by_class[static_cast<std::size_t>(y)].push_back(static_cast<Eigen::Index>(t));
  }
  std::vector<Eigen::Index> sampled;
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& pool = by_class[static_cast<std::size_t>(i)];
    const std::int64_t want = per_class(i);
    if (want == 0) continue;
    if (pool.empty())
      throw InputError("no instances of class " + std::to_string(i) + " to sample");
    if (mode == Replacement::kWith) {
      for (std::int64_t d = 0; d < want; ++d)
        sampled.push_back(pool[static_cast<std::size_t>(
            rng.uniform_index(static_cast<std::int64_t>(pool.size())))]);
    } else {
      if (want > static_cast<std::int64_t>(pool.size()))
        throw InputError("class " + std::to_string(i) + " has only " +
                         std::to_string(pool.size()) + " instances, requested " +
                         std::to_string(want) + " without replacement");
      auto picked = sample_without_replacement(pool, want, rng);
      sampled.insert(sampled.end(), picked.begin(), picked.end());
    }
  }
  return sampled;
}

std::vector<Eigen::Index> sample_variable_indices(Eigen::Index population_size,
                                                  std::int64_t n, Rng& rng,
                                                  Replacement mode) {
  if (n < 0) throw InputError("sample size must be nonnegative");
  std::vector<Eigen::Index> sampled;
  sampled.reserve(static_cast<std::size_t>(n));
  if (n == 0) return sampled;
  if (population_size <= 0) throw InputError("cannot sample from an empty population");
  if (mode == Replacement::kWith) {
    for (std::int64_t d = 0; d < n; ++d)
      sampled.push_back(rng.uniform_index(population_size));
  } else {
    if (n > population_size)
      throw InputError("requested " + std::to_string(n) +
                       " draws without replacement from a population of " +
                       std::to_string(population_size));
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(population_size));
    for (Eigen::Index t = 0; t < population_size; ++t)
      pool[static_cast<std::size_t>(t)] = t;
    sampled = sample_without_replacement(pool, n, rng);
  }
  return sampled;
}

namespace {

LabelPairSet gather(const LabelPairSet& population,
                    const std::vector<Eigen::Index>& indices) {
  LabelPairSet out{population.k, {}};
  out.pairs.reserve(indices.size());
  for (const auto t : indices)
    out.pairs.push_back(population.pairs[static_cast<std::size_t>(t)]);
  return out;
}

}  // namespace

LabelPairSet fixed_sample(const LabelPairSet& population, const CountVector& per_class,
                          Rng& rng, Replacement mode) {
  population.check();
  if (per_class.size() != population.k)
    throw InputError("per-class counts must have length k");
  std::vector<int> clean(population.pairs.size());
  for (std::size_t t = 0; t < clean.size(); ++t) clean[t] = population.pairs[t].clean;
  return gather(population, sample_fixed_indices(clean, per_class, rng, mode));
}

LabelPairSet variable_sample(const LabelPairSet& population, std::int64_t n, Rng& rng,
                             Replacement mode) {
  population.check();
  return gather(population,
                sample_variable_indices(
                    static_cast<Eigen::Index>(population.pairs.size()), n, rng, mode));
}

LabelPairSet read_pairs_tsv(const std::string& path, Eigen::Index k) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pairs file: " + path);
  LabelPairSet s{k, {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.find_first_not_of("cleanoisy\t ") == std::string::npos)
      continue;  // optional header
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": expected two tab-separated integers");
    int clean = 0, noisy = 0;
    const auto r1 = std::from_chars(line.data(), line.data() + tab, clean);
    const auto r2 =
        std::from_chars(line.data() + tab + 1, line.data() + line.size(), noisy);
    if (r1.ec != std::errc{} || r1.ptr != line.data() + tab || r2.ec != std::errc{} ||
        r2.ptr != line.data() + line.size())
      throw InputError(path + ":" + std::to_string(line_no) + ": malformed pair line");
    s.pairs.push_back({clean, noisy});
  }
  try {
    s.check();
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
  return s;
}

void write_pairs_tsv(const std::string& path, const LabelPairSet& s) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write pairs file: " + path);
  out << "clean\tnoisy\n";
  for (const auto& p : s.pairs) out << p.clean << '\t' << p.noisy << '\n';
}

}  // namespace noise_oracle
