// noise_oracle/simulation.hpp

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

#ifndef NOISE_ORACLE_SIMULATION_HPP_
#define NOISE_ORACLE_SIMULATION_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "noise_oracle/label_pairs.hpp"
#include "noise_oracle/noise_matrix.hpp"
#include "noise_oracle/theory.hpp"

namespace noise_oracle {

// Per-class sample counts are prescribed.
struct FixedScheme {
  CountVector per_class;
};

// A total budget is drawn from the whole source; class counts come out random.
struct VariableScheme {
  std::int64_t n = 0;
};

using SamplingScheme = std::variant<FixedScheme, VariableScheme>;

// Pairs are generated from a known matrix, clean labels drawn from the prior.
struct SyntheticSource {
  NoiseMatrix matrix;
  ClassPrior prior;
};

// Pairs are resampled from a real population. `reference` is the matrix
// computed over the whole population, standing in for the unknown true noise
// process; reported errors are relative to this approximation.
struct CorpusSource {
  LabelPairSet population;
  NoiseMatrix reference;
  ClassPrior prior;
};

using SimulationSource = std::variant<SyntheticSource, CorpusSource>;

struct SimulationConfig {
  std::int64_t repetitions = 500;
  SamplingScheme scheme;
  SimulationSource source;
  std::uint64_t master_seed = 0;
  Replacement replacement = Replacement::kWith;
  bool keep_per_repetition = false;
  int threads = 1;
};

struct SimulationResult {
  double mean_se = 0.0;
  double std_se = 0.0;   // std of SE across repetitions (not SE of the mean)
  double theory_se = 0.0;
  double empty_row_rate = 0.0;  // repetitions with at least one unseen class
  std::optional<std::vector<double>> per_repetition_se;
};

// Repeats sample -> estimate -> score and aggregates. Repetition r draws its
// stream from child_seed(master_seed, r), so results are bit-identical for a
// given config regardless of the thread count.
SimulationResult run_simulation(const SimulationConfig& config);

// Grid over sample sizes (interpreted as n_i for a fixed scheme, n for a
// variable one).
struct SampleSizeGrid {
  std::vector<std::int64_t> sizes;
};

// Grid over noise levels; the synthetic matrix is regenerated at each
// epsilon while the scheme (and its size) stays as configured.
struct NoiseLevelGrid {
  std::function<NoiseMatrix(double)> generator;
  std::vector<double> epsilons;
};

using SweepAxis = std::variant<SampleSizeGrid, NoiseLevelGrid>;

struct SweepRow {
  double grid_value;
  SimulationResult result;
};

// One run_simulation per grid point, each under child_seed(master, point).
std::vector<SweepRow> sweep(const SimulationConfig& base, const SweepAxis& axis);

// CSV: grid_value,theory_se,empirical_mean_se,empirical_std_se,empty_row_rate.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_SIMULATION_HPP_
