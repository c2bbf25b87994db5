// noise_oracle/blobs.cpp

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

#include "noise_oracle/blobs.hpp"

#include <cmath>
#include <numbers>

namespace noise_oracle {

ClassPrior BlobsSpec::class_prior() const {
  if (prior.size() == 0) {
    Vector p = Vector::Constant(k, 0.3 / static_cast<double>(k - 1));
    p(0) = 0.7;
    return ClassPrior::from_probs(p / p.sum());
  }
  return ClassPrior::from_probs(prior);
}

TrainingSet sample_blobs(const BlobsSpec& spec, Eigen::Index n, Rng& rng) {
  if (spec.k < 2 || spec.dim < 2)
    throw InputError("blobs need k >= 2 and dim >= 2");
  const ClassPrior prior = spec.class_prior();
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(spec.k, spec.dim);
  for (Eigen::Index c = 0; c < spec.k; ++c) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(spec.k);
    means(c, 0) = spec.radius * std::cos(angle);
    means(c, 1) = spec.radius * std::sin(angle);
  }
  TrainingSet data;
  data.features.resize(n, spec.dim);
  data.labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto c = rng.categorical(prior.probs());
    data.labels[static_cast<std::size_t>(t)] = static_cast<int>(c);
    for (Eigen::Index f = 0; f < spec.dim; ++f)
      data.features(t, f) = means(c, f) + spec.spread * rng.next_gaussian();
  }
  return data;
}

BlobsBenchmark make_blobs_benchmark(const BlobsSpec& spec, Eigen::Index pool_size,
                                    Eigen::Index test_size, const NoiseMatrix& noise,
                                    std::uint64_t seed) {
  if (noise.k() != spec.k) throw InputError("noise matrix does not match blob classes");
  BlobsBenchmark benchmark{TrainingSet{}, {}, TrainingSet{}, noise, spec.class_prior()};
  Rng pool_rng(child_seed(seed, 0));
  benchmark.pool = sample_blobs(spec, pool_size, pool_rng);
  Rng corrupt_rng(child_seed(seed, 1));
  benchmark.pool_noisy = corrupt_labels(benchmark.pool.labels, noise, corrupt_rng);
  Rng test_rng(child_seed(seed, 2));
  benchmark.test = sample_blobs(spec, test_size, test_rng);
  return benchmark;
}

ParallelCorpus blobs_corpus(const BlobsBenchmark& benchmark) {
  ParallelCorpus corpus;
  corpus.k = benchmark.noise.k();
  for (Eigen::Index c = 0; c < corpus.k; ++c)
    corpus.label_names.push_back("c" + std::to_string(c));
  corpus.label_set_names = {"noisy1"};
  corpus.clean = benchmark.pool.labels;
  corpus.noisy = {benchmark.pool_noisy};
  corpus.features = benchmark.pool.features;
  for (Eigen::Index t = 0; t < benchmark.pool.size(); ++t) {
    corpus.tokens.push_back("x" + std::to_string(t));
    corpus.sentence.push_back(0);
  }
  return corpus;
}

}  // namespace noise_oracle
