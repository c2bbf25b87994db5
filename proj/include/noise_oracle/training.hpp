// noise_oracle/training.hpp

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

#ifndef NOISE_ORACLE_TRAINING_HPP_
#define NOISE_ORACLE_TRAINING_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noise_oracle/corpus.hpp"
#include "noise_oracle/label_pairs.hpp"
#include "noise_oracle/noise_matrix.hpp"
#include "noise_oracle/rng.hpp"
#include "noise_oracle/types.hpp"

namespace noise_oracle {

// Multinomial logistic regression over fixed numeric features. This is the
// deliberately small stand-in for a task-specific backbone: convex, so runs
// differ only through the data and the noise layer, not through training
// variance of a deep model.
struct LinearSoftmaxModel {
  Matrix weights;  // k x d
  Vector bias;     // k

  static LinearSoftmaxModel zeros(Eigen::Index k, Eigen::Index d);
  Eigen::Index k() const { return weights.rows(); }
  Eigen::Index dim() const { return weights.cols(); }
};

// Feature matrix (instances x d) with one label per row.
struct TrainingSet {
  Eigen::MatrixXd features;
  std::vector<int> labels;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
  void check(Eigen::Index k) const;
};

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 0.5;
  int batch_size = 32;
  double noisy_multiplier = 15.0;  // noisy subset size as multiple of |D_C|
  double log_epsilon = 1e-12;      // probability clamp before the log
  std::uint64_t seed = 0;

  void check() const;
};

// softmax(W x + b).
Vector forward_clean(const LinearSoftmaxModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& features);

// Clean posterior pushed through the transition matrix.
Vector forward_noisy(const LinearSoftmaxModel& model, const NoiseMatrix& noise,
                     const Eigen::Ref<const Eigen::VectorXd>& features);

std::vector<int> predict_labels(const LinearSoftmaxModel& model,
                                const Eigen::MatrixXd& features);

struct LossGradient {
  double loss = 0.0;
  Matrix dweights;
  Vector dbias;
};

// Mean cross-entropy over the batch, composed through `noise` when given
// (gradients never flow into the matrix; it stays fixed). Probabilities are
// clamped at log_epsilon before the log.
LossGradient loss_and_gradient(const LinearSoftmaxModel& model, const Matrix* noise,
                               const TrainingSet& data,
                               std::span<const Eigen::Index> batch,
                               double log_epsilon = 1e-12);

struct TrainResult {
  LinearSoftmaxModel model;
  std::vector<double> clean_loss;  // one entry per epoch
  std::vector<double> noisy_loss;
  int best_epoch = -1;  // dev-selected epoch; last epoch when no dev set given
  std::vector<Eigen::Index> substituted_rows;  // empty estimate rows -> uniform
};

// Alternating mini-batch gradient descent: per epoch one pass over the clean
// set, then one pass over a freshly drawn noisy subset of size
// noisy_multiplier * |clean| (through the noise layer when `noise` is given,
// as if clean otherwise). Empty estimate rows are replaced by uniform rows
// for training only; the estimate itself is never modified. With a dev set
// the weights of the best clean-dev-accuracy epoch are returned.
TrainResult train(const LinearSoftmaxModel& init, const TrainingSet& clean_data,
                  const TrainingSet& noisy_data, const NoiseEstimate* noise,
                  const TrainConfig& config, const TrainingSet* dev = nullptr);

struct EvalResult {
  double accuracy = 0.0;
  double micro_f1_excl = 0.0;  // micro-F1, non-entity class excluded if given
  Vector per_class_f1;
};

EvalResult evaluate(const LinearSoftmaxModel& model, const TrainingSet& test,
                    std::optional<int> non_entity_class = std::nullopt);

// Trained model as JSON {d, k, weights (row-major), bias}.
std::string to_json(const LinearSoftmaxModel& model);
LinearSoftmaxModel model_from_json(const std::string& text);
LinearSoftmaxModel read_model(const std::string& path);
void write_model(const std::string& path, const LinearSoftmaxModel& model);

// ---------------------------------------------------------------------------
// Estimation-error vs test-performance experiment.

enum class SchemeKind { kFixed, kVariable };

struct CorrelationConfig {
  SchemeKind scheme = SchemeKind::kFixed;
  std::vector<std::int64_t> grid;  // n_i values (fixed) or n values (variable)
  int repetitions = 20;
  std::uint64_t master_seed = 0;
  // When set, the base model trains on this fixed clean budget (per class
  // for fixed sampling, total for variable) while the estimation sample
  // follows the grid.
  std::optional<std::int64_t> fix_base_clean;
  TrainConfig train_config;
  std::optional<int> metric_non_entity;  // metric = micro-F1 excluding this
                                         // class; accuracy when unset
  int threads = 1;
};

// The population the experiment samples from.
struct CorrelationSource {
  TrainingSet pool;              // clean features + labels
  std::vector<int> pool_noisy;   // parallel noisy labels for the pool
  TrainingSet test;
  NoiseMatrix truth;             // known matrix, or the whole-data one
  ClassPrior prior;
};

struct CorrelationRow {
  double grid_value;
  double expected_se;
  double mean_metric;
  double std_metric;
};

struct CorrelationResult {
  std::vector<CorrelationRow> rows;
  double pearson;  // NaN when undefined (zero variance on either side)
};

// For every grid point and repetition: draw the clean sample, estimate the
// transition matrix from its pairs, train with the noise layer, and score on
// the test set. Pairs each grid point's mean metric with the closed-form
// expected estimation error and reports the Pearson correlation across the
// grid.
CorrelationResult correlation_experiment(const CorrelationSource& source,
                                         const CorrelationConfig& config);

// CSV: grid,expected_se,mean_metric,std_metric,pearson (the correlation is
// repeated on every row).
void write_correlation_csv(const std::string& path, const CorrelationResult& result);

double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_TRAINING_HPP_
