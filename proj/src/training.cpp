// noise_oracle/training.cpp

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

#include "noise_oracle/training.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "noise_oracle/csv.hpp"
#include "noise_oracle/parallel.hpp"
#include "noise_oracle/theory.hpp"

namespace noise_oracle {

LinearSoftmaxModel LinearSoftmaxModel::zeros(Eigen::Index k, Eigen::Index d) {
  if (k < 2 || d < 1) throw InputError("model needs k >= 2 and d >= 1");
  return {Matrix::Zero(k, d), Vector::Zero(k)};
}

void TrainingSet::check(Eigen::Index k) const {
  if (static_cast<Eigen::Index>(labels.size()) != features.rows())
    throw InputError("training set: label count does not match feature rows");
  if (!features.allFinite())
    throw InputError("training set contains non-finite features");
  for (const int y : labels)
    if (y < 0 || y >= k)
      throw InputError("training label " + std::to_string(y) + " out of range");
}

void TrainConfig::check() const {
  if (epochs < 1) throw InputError("epochs must be positive");
  if (!(learning_rate > 0.0)) throw InputError("learning rate must be positive");
  if (batch_size < 1) throw InputError("batch size must be positive");
  if (!(noisy_multiplier > 0.0)) throw InputError("noisy multiplier must be positive");
  if (!(log_epsilon > 0.0) || log_epsilon > 1e-6)
    throw InputError("log clamp must lie in (0, 1e-6]");
}

namespace {

Vector softmax(Vector logits) {
  logits.array() -= logits.maxCoeff();
  Vector p = logits.array().exp();
  return p / p.sum();
}

}  // namespace

Vector forward_clean(const LinearSoftmaxModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& features) {
  if (features.size() != model.dim())
    throw InputError("feature length does not match model dimension");
  return softmax(model.weights * features + model.bias);
}

Vector forward_noisy(const LinearSoftmaxModel& model, const NoiseMatrix& noise,
                     const Eigen::Ref<const Eigen::VectorXd>& features) {
  return compose_noisy_posterior(forward_clean(model, features), noise);
}

std::vector<int> predict_labels(const LinearSoftmaxModel& model,
                                const Eigen::MatrixXd& features) {
  if (features.cols() != model.dim())
    throw InputError("feature width does not match model dimension");
  std::vector<int> labels(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index t = 0; t < features.rows(); ++t) {
    Eigen::Index best = 0;
    // argmax of the logits; softmax is monotone so the posterior agrees.
    (model.weights * features.row(t).transpose() + model.bias).maxCoeff(&best);
    labels[static_cast<std::size_t>(t)] = static_cast<int>(best);
  }
  return labels;
}

LossGradient loss_and_gradient(const LinearSoftmaxModel& model, const Matrix* noise,
                               const TrainingSet& data,
                               std::span<const Eigen::Index> batch,
                               double log_epsilon) {
  if (batch.empty()) throw InputError("loss_and_gradient: empty batch");
  if (noise && (noise->rows() != model.k() || noise->cols() != model.k()))
    throw InputError("noise matrix does not match the model's class count");
  const Eigen::Index k = model.k();
  LossGradient out{0.0, Matrix::Zero(k, model.dim()), Vector::Zero(k)};
  KahanSum loss;
  for (const Eigen::Index t : batch) {
    const auto x = data.features.row(t).transpose();
    if (!x.allFinite()) throw InputError("non-finite features in batch");
    const int target = data.labels[static_cast<std::size_t>(t)];
    const Vector p = softmax(model.weights * x + model.bias);
    Vector grad_logits;
    if (noise) {
      // q_j = sum_i M_ij p_i; d(-log q_y)/dz_i = p_i - p_i M_iy / q_y.
      const double q_target = noise->col(target).dot(p);
      if (q_target > log_epsilon) {
        grad_logits =
            p - (p.array() * noise->col(target).array()).matrix() / q_target;
        loss.add(-std::log(q_target));
      } else {
        grad_logits = Vector::Zero(k);  // clamped region is flat
        loss.add(-std::log(log_epsilon));
      }
    } else {
      if (p(target) > log_epsilon) {
        grad_logits = p;
        grad_logits(target) -= 1.0;
        loss.add(-std::log(p(target)));
      } else {
        grad_logits = Vector::Zero(k);
        loss.add(-std::log(log_epsilon));
      }
    }
    out.dweights.noalias() += grad_logits * x.transpose();
    out.dbias += grad_logits;
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  out.loss = loss.value() * scale;
  out.dweights *= scale;
  out.dbias *= scale;
  return out;
}

namespace {

// One mini-batch pass over the given index order; returns the mean loss.
double sgd_pass(LinearSoftmaxModel& model, const Matrix* noise,
                const TrainingSet& data, std::span<const Eigen::Index> order,
                const TrainConfig& config) {
  KahanSum loss;
  std::int64_t batches = 0;
  for (std::size_t start = 0; start < order.size();
       start += static_cast<std::size_t>(config.batch_size)) {
    const auto count =
        std::min(order.size() - start, static_cast<std::size_t>(config.batch_size));
    const LossGradient g = loss_and_gradient(
        model, noise, data, order.subspan(start, count), config.log_epsilon);
    model.weights -= config.learning_rate * g.dweights;
    model.bias -= config.learning_rate * g.dbias;
    loss.add(g.loss);
    ++batches;
  }
  return batches > 0 ? loss.value() / static_cast<double>(batches) : 0.0;
}

double dev_accuracy(const LinearSoftmaxModel& model, const TrainingSet& dev) {
  const std::vector<int> predicted = predict_labels(model, dev.features);
  std::int64_t correct = 0;
  for (std::size_t t = 0; t < predicted.size(); ++t)
    correct += predicted[t] == dev.labels[t];
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

}  // namespace

TrainResult train(const LinearSoftmaxModel& init, const TrainingSet& clean_data,
                  const TrainingSet& noisy_data, const NoiseEstimate* noise,
                  const TrainConfig& config, const TrainingSet* dev) {
  config.check();
  clean_data.check(init.k());
  noisy_data.check(init.k());
  if (dev) dev->check(init.k());
  if (clean_data.size() == 0) throw InputError("clean training set is empty");
  if (clean_data.dim() != init.dim() || noisy_data.dim() != init.dim())
    throw InputError("feature dimension does not match the model");

  TrainResult result;
  // Empty estimate rows carry no information about that class's noise; train
  // through a uniform row instead. The estimator output itself is preserved.
  Matrix effective;
  if (noise) {
    if (noise->probs.rows() != init.k())
      throw InputError("noise estimate does not match the model's class count");
    effective = noise->probs;
    for (const auto row : noise->empty_rows) {
      effective.row(row).setConstant(1.0 / static_cast<double>(init.k()));
      result.substituted_rows.push_back(row);
    }
  }

  Rng rng(config.seed);
  LinearSoftmaxModel model = init;
  LinearSoftmaxModel best = init;
  double best_accuracy = -1.0;
  int best_epoch = -1;

  std::vector<Eigen::Index> clean_order(static_cast<std::size_t>(clean_data.size()));
  for (std::size_t t = 0; t < clean_order.size(); ++t)
    clean_order[t] = static_cast<Eigen::Index>(t);
  const auto subset_size = static_cast<std::int64_t>(
      std::llround(config.noisy_multiplier * static_cast<double>(clean_data.size())));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(clean_order);
    result.clean_loss.push_back(
        sgd_pass(model, nullptr, clean_data, clean_order, config));

    std::vector<Eigen::Index> subset(static_cast<std::size_t>(subset_size));
    for (auto& idx : subset) idx = rng.uniform_index(noisy_data.size());
    result.noisy_loss.push_back(sgd_pass(model, noise ? &effective : nullptr,
                                         noisy_data, subset, config));

    if (dev) {
      const double accuracy = dev_accuracy(model, *dev);
      if (accuracy > best_accuracy) {
        best_accuracy = accuracy;
        best = model;
        best_epoch = epoch;
      }
    }
  }

  result.model = dev ? best : model;
  result.best_epoch = dev ? best_epoch : config.epochs - 1;
  return result;
}

EvalResult evaluate(const LinearSoftmaxModel& model, const TrainingSet& test,
                    std::optional<int> non_entity_class) {
  test.check(model.k());
  if (test.size() == 0) throw InputError("test set is empty");
  const std::vector<int> predicted = predict_labels(model, test.features);
  const QualityReport micro = micro_quality(test.labels, predicted, non_entity_class);

  EvalResult result;
  result.accuracy = micro.accuracy;
  result.micro_f1_excl = micro.f1;
  result.per_class_f1 = Vector::Zero(model.k());
  for (Eigen::Index c = 0; c < model.k(); ++c) {
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t t = 0; t < predicted.size(); ++t) {
      const bool is_gold = test.labels[t] == c;
      const bool is_pred = predicted[t] == c;
      tp += is_gold && is_pred;
      fp += !is_gold && is_pred;
      fn += is_gold && !is_pred;
    }
    result.per_class_f1(c) =
        tp > 0 ? 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn)
               : 0.0;
  }
  return result;
}

std::string to_json(const LinearSoftmaxModel& model) {
  nlohmann::json j;
  j["k"] = model.k();
  j["d"] = model.dim();
  auto weights = nlohmann::json::array();
  for (Eigen::Index i = 0; i < model.k(); ++i)
    for (Eigen::Index c = 0; c < model.dim(); ++c) weights.push_back(model.weights(i, c));
  j["weights"] = std::move(weights);
  auto bias = nlohmann::json::array();
  for (Eigen::Index i = 0; i < model.k(); ++i) bias.push_back(model.bias(i));
  j["bias"] = std::move(bias);
  return j.dump(2);
}

LinearSoftmaxModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model JSON parse error: ") + e.what());
  }
  try {
    const auto k = j.at("k").get<Eigen::Index>();
    const auto d = j.at("d").get<Eigen::Index>();
    const auto& weights = j.at("weights");
    const auto& bias = j.at("bias");
    if (static_cast<Eigen::Index>(weights.size()) != k * d ||
        static_cast<Eigen::Index>(bias.size()) != k)
      throw InputError("model JSON: weight or bias length mismatch");
    LinearSoftmaxModel model = LinearSoftmaxModel::zeros(k, d);
    for (Eigen::Index i = 0; i < k; ++i) {
      model.bias(i) = bias.at(i).get<double>();
      for (Eigen::Index c = 0; c < d; ++c)
        model.weights(i, c) = weights.at(i * d + c).get<double>();
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model JSON: ") + e.what());
  }
}

LinearSoftmaxModel read_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

void write_model(const std::string& path, const LinearSoftmaxModel& model) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file: " + path);
  out << to_json(model) << '\n';
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    return std::numeric_limits<double>::quiet_NaN();
  const auto n = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

namespace {

// Clean sample for one repetition: indices into the pool.
std::vector<Eigen::Index> draw_clean_indices(const CorrelationSource& source,
                                             SchemeKind scheme, std::int64_t size,
                                             Rng& rng) {
  if (scheme == SchemeKind::kFixed) {
    const CountVector per_class = CountVector::Constant(source.truth.k(), size);
    return sample_fixed_indices(source.pool.labels, per_class, rng);
  }
  return sample_variable_indices(source.pool.size(), size, rng);
}

TrainingSet gather_set(const TrainingSet& pool, std::span<const Eigen::Index> indices) {
  TrainingSet out;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), pool.dim());
  out.labels.resize(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    out.features.row(static_cast<Eigen::Index>(t)) = pool.features.row(indices[t]);
    out.labels[t] = pool.labels[static_cast<std::size_t>(indices[t])];
  }
  return out;
}

}  // namespace

CorrelationResult correlation_experiment(const CorrelationSource& source,
                                         const CorrelationConfig& config) {
  if (config.grid.empty()) throw InputError("correlation experiment needs a grid");
  if (config.repetitions < 2) throw InputError("correlation experiment needs >= 2 reps");
  config.train_config.check();
  const Eigen::Index k = source.truth.k();
  source.pool.check(k);
  source.test.check(k);
  if (source.pool_noisy.size() != source.pool.labels.size())
    throw InputError("noisy labels do not cover the pool");

  TrainingSet noisy_pool = source.pool;
  noisy_pool.labels = source.pool_noisy;
  noisy_pool.check(k);

  CorrelationResult result;
  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    const std::int64_t size = config.grid[g];
    const std::uint64_t grid_seed = child_seed(config.master_seed, g);

    double expected;
    if (config.scheme == SchemeKind::kFixed)
      expected = expected_error_fixed(source.truth, CountVector::Constant(k, size)).total;
    else
      expected = expected_error_variable(source.truth, source.prior, size).total;

    std::vector<double> metric(static_cast<std::size_t>(config.repetitions));
    parallel_for_index(config.repetitions, config.threads, [&](std::int64_t r) {
      Rng rng(child_seed(grid_seed, static_cast<std::uint64_t>(r)));
      const auto estimation_indices =
          draw_clean_indices(source, config.scheme, size, rng);

      // Pairs observed on the clean sample drive the estimate.
      LabelPairSet pairs{k, {}};
      for (const auto t : estimation_indices)
        pairs.pairs.push_back({source.pool.labels[static_cast<std::size_t>(t)],
                               source.pool_noisy[static_cast<std::size_t>(t)]});
      const NoiseEstimate estimate = estimate_noise_matrix(pairs);

      std::vector<Eigen::Index> base_indices = estimation_indices;
      if (config.fix_base_clean)
        base_indices =
            draw_clean_indices(source, config.scheme, *config.fix_base_clean, rng);
      const TrainingSet clean_sample = gather_set(source.pool, base_indices);

      TrainConfig per_run = config.train_config;
      per_run.seed = rng.next_u64();
      const TrainResult trained =
          train(LinearSoftmaxModel::zeros(k, source.pool.dim()), clean_sample,
                noisy_pool, &estimate, per_run);
      const EvalResult eval =
          evaluate(trained.model, source.test, config.metric_non_entity);
      metric[static_cast<std::size_t>(r)] =
          config.metric_non_entity ? eval.micro_f1_excl : eval.accuracy;
    });

    KahanSum sum;
    for (const double m : metric) sum.add(m);
    const double mean = sum.value() / static_cast<double>(config.repetitions);
    KahanSum sq_dev;
    for (const double m : metric) sq_dev.add((m - mean) * (m - mean));
    result.rows.push_back(
        {static_cast<double>(size), expected, mean,
         std::sqrt(sq_dev.value() / static_cast<double>(config.repetitions))});
  }

  std::vector<double> xs, ys;
  for (const auto& row : result.rows) {
    xs.push_back(row.expected_se);
    ys.push_back(row.mean_metric);
  }
  result.pearson = pearson_correlation(xs, ys);
  return result;
}

void write_correlation_csv(const std::string& path, const CorrelationResult& result) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write csv file: " + path);
  out << "grid,expected_se,mean_metric,std_metric,pearson\n";
  for (const auto& row : result.rows) {
    out << format_double(row.grid_value) << ',' << format_double(row.expected_se) << ','
        << format_double(row.mean_metric) << ',' << format_double(row.std_metric) << ','
        << format_double(result.pearson) << '\n';
  }
}

}  // namespace noise_oracle
