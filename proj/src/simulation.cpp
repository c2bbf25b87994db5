// noise_oracle/simulation.cpp

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

#include "noise_oracle/simulation.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "noise_oracle/csv.hpp"
#include "noise_oracle/parallel.hpp"

namespace noise_oracle {

namespace {

const NoiseMatrix& ground_truth(const SimulationSource& source) {
  if (const auto* synthetic = std::get_if<SyntheticSource>(&source))
    return synthetic->matrix;
  return std::get<CorpusSource>(source).reference;
}

Eigen::Index class_count(const SimulationSource& source) {
  return ground_truth(source).k();
}

// One repetition's sample of pairs.
LabelPairSet draw_pairs(const SimulationConfig& config, Rng& rng) {
  const Eigen::Index k = class_count(config.source);
  if (const auto* synthetic = std::get_if<SyntheticSource>(&config.source)) {
    LabelPairSet pairs{k, {}};
    if (const auto* fixed = std::get_if<FixedScheme>(&config.scheme)) {
      for (Eigen::Index i = 0; i < k; ++i) {
        const auto row = synthetic->matrix.probs().row(i).transpose();
        for (std::int64_t d = 0; d < fixed->per_class(i); ++d)
          pairs.pairs.push_back(
              {static_cast<int>(i), static_cast<int>(rng.categorical(row))});
      }
    } else {
      const auto& variable = std::get<VariableScheme>(config.scheme);
      for (std::int64_t d = 0; d < variable.n; ++d) {
        const auto clean = rng.categorical(synthetic->prior.probs());
        const auto noisy =
            rng.categorical(synthetic->matrix.probs().row(clean).transpose());
        pairs.pairs.push_back({static_cast<int>(clean), static_cast<int>(noisy)});
      }
    }
    return pairs;
  }
  const auto& corpus = std::get<CorpusSource>(config.source);
  if (const auto* fixed = std::get_if<FixedScheme>(&config.scheme))
    return fixed_sample(corpus.population, fixed->per_class, rng, config.replacement);
  return variable_sample(corpus.population, std::get<VariableScheme>(config.scheme).n,
                         rng, config.replacement);
}

double theory_value(const SimulationConfig& config) {
  const NoiseMatrix& truth = ground_truth(config.source);
  try {
    if (const auto* fixed = std::get_if<FixedScheme>(&config.scheme))
      return expected_error_fixed(truth, fixed->per_class).total;
    const auto& prior = std::visit([](const auto& s) -> const ClassPrior& {
      return s.prior;
    }, config.source);
    return expected_error_variable(truth, prior,
                                   std::get<VariableScheme>(config.scheme).n)
        .total;
  } catch (const InputError&) {
    // Closed form undefined (e.g. some n_i = 0); the empirical columns still
    // make sense.
    return std::numeric_limits<double>::quiet_NaN();
  }
}

void check_config(const SimulationConfig& config) {
  if (config.repetitions < 1) throw InputError("repetitions must be >= 1");
  const Eigen::Index k = class_count(config.source);
  if (const auto* fixed = std::get_if<FixedScheme>(&config.scheme)) {
    if (fixed->per_class.size() != k)
      throw InputError("per-class counts must have length k");
    if ((fixed->per_class.array() < 0).any())
      throw InputError("per-class counts must be nonnegative");
  } else if (std::get<VariableScheme>(config.scheme).n < 0) {
    throw InputError("sample size must be nonnegative");
  }
  if (const auto* synthetic = std::get_if<SyntheticSource>(&config.source)) {
    if (synthetic->prior.k() != k)
      throw InputError("prior and matrix disagree on k");
  } else {
    const auto& corpus = std::get<CorpusSource>(config.source);
    if (corpus.population.k != k || corpus.prior.k() != k)
      throw InputError("corpus source components disagree on k");
  }
}

}  // namespace

SimulationResult run_simulation(const SimulationConfig& config) {
  check_config(config);
  const NoiseMatrix& truth = ground_truth(config.source);
  const auto reps = config.repetitions;

  std::vector<double> se(static_cast<std::size_t>(reps));
  std::vector<char> had_empty_row(static_cast<std::size_t>(reps), 0);

  parallel_for_index(reps, config.threads, [&](std::int64_t r) {
    Rng rng(child_seed(config.master_seed, static_cast<std::uint64_t>(r)));
    const LabelPairSet sample = draw_pairs(config, rng);
    const NoiseEstimate estimate = estimate_noise_matrix(sample);
    se[static_cast<std::size_t>(r)] = squared_error(truth.probs(), estimate.probs);
    had_empty_row[static_cast<std::size_t>(r)] = estimate.has_empty_rows() ? 1 : 0;
  });

  // Ordered reduction over repetition index.
  KahanSum sum;
  std::int64_t empty_count = 0;
  for (std::int64_t r = 0; r < reps; ++r) {
    sum.add(se[static_cast<std::size_t>(r)]);
    empty_count += had_empty_row[static_cast<std::size_t>(r)];
  }
  const double mean = sum.value() / static_cast<double>(reps);
  KahanSum sq_dev;
  for (const double v : se) sq_dev.add((v - mean) * (v - mean));

  SimulationResult result;
  result.mean_se = mean;
  result.std_se = std::sqrt(sq_dev.value() / static_cast<double>(reps));
  result.theory_se = theory_value(config);
  result.empty_row_rate =
      static_cast<double>(empty_count) / static_cast<double>(reps);
  if (config.keep_per_repetition) result.per_repetition_se = std::move(se);
  return result;
}

std::vector<SweepRow> sweep(const SimulationConfig& base, const SweepAxis& axis) {
  std::vector<SweepRow> rows;
  if (const auto* sizes = std::get_if<SampleSizeGrid>(&axis)) {
    if (sizes->sizes.empty()) throw InputError("sweep needs a nonempty grid");
    for (std::size_t g = 0; g < sizes->sizes.size(); ++g) {
      SimulationConfig point = base;
      point.master_seed = child_seed(base.master_seed, g);
      const std::int64_t size = sizes->sizes[g];
      if (std::holds_alternative<FixedScheme>(point.scheme))
        point.scheme = FixedScheme{
            CountVector::Constant(class_count(point.source), size)};
      else
        point.scheme = VariableScheme{size};
      rows.push_back({static_cast<double>(size), run_simulation(point)});
    }
    return rows;
  }
  const auto& levels = std::get<NoiseLevelGrid>(axis);
  if (levels.epsilons.empty()) throw InputError("sweep needs a nonempty grid");
  if (!std::holds_alternative<SyntheticSource>(base.source))
    throw InputError("noise-level sweeps require a synthetic source");
  for (std::size_t g = 0; g < levels.epsilons.size(); ++g) {
    SimulationConfig point = base;
    point.master_seed = child_seed(base.master_seed, g);
    auto& synthetic = std::get<SyntheticSource>(point.source);
    synthetic.matrix = levels.generator(levels.epsilons[g]);
    rows.push_back({levels.epsilons[g], run_simulation(point)});
  }
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write csv file: " + path);
  out << "grid_value,theory_se,empirical_mean_se,empirical_std_se,empty_row_rate\n";
  for (const auto& row : rows) {
    out << format_double(row.grid_value) << ',' << format_double(row.result.theory_se)
        << ',' << format_double(row.result.mean_se) << ','
        << format_double(row.result.std_se) << ','
        << format_double(row.result.empty_row_rate) << '\n';
  }
}

}  // namespace noise_oracle
