// noise_oracle/blobs.hpp

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

#ifndef NOISE_ORACLE_BLOBS_HPP_
#define NOISE_ORACLE_BLOBS_HPP_

#include "noise_oracle/noise_matrix.hpp"
#include "noise_oracle/rng.hpp"
#include "noise_oracle/training.hpp"

namespace noise_oracle {

// Gaussian-blobs benchmark: isotropic clusters whose means sit on a circle
// in the first two feature coordinates. The default prior is skewed the way
// entity-tagging data is, which is the regime where the sampling scheme
// matters.
struct BlobsSpec {
  Eigen::Index k = 3;
  Eigen::Index dim = 2;
  Vector prior;        // defaults to [0.7, 0.15, 0.15]-style skew when empty
  double radius = 2.0;
  double spread = 1.0;

  ClassPrior class_prior() const;
};

TrainingSet sample_blobs(const BlobsSpec& spec, Eigen::Index n, Rng& rng);

// The benchmark bundle used by the downstream experiments: a clean pool with
// parallel noisy labels, plus a clean test set.
struct BlobsBenchmark {
  TrainingSet pool;
  std::vector<int> pool_noisy;
  TrainingSet test;
  NoiseMatrix noise;
  ClassPrior prior;
};

BlobsBenchmark make_blobs_benchmark(const BlobsSpec& spec, Eigen::Index pool_size,
                                    Eigen::Index test_size, const NoiseMatrix& noise,
                                    std::uint64_t seed);

// The benchmark as a corpus (features as float columns, integer-named tags),
// for exercising the file-based pipeline on the same data.
ParallelCorpus blobs_corpus(const BlobsBenchmark& benchmark);

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_BLOBS_HPP_
