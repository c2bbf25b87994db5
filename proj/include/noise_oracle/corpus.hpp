// noise_oracle/corpus.hpp

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

#ifndef NOISE_ORACLE_CORPUS_HPP_
#define NOISE_ORACLE_CORPUS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noise_oracle/label_pairs.hpp"
#include "noise_oracle/noise_matrix.hpp"
#include "noise_oracle/types.hpp"

namespace noise_oracle {

// A corpus with one clean label and one or more parallel noisy labelings per
// instance. Labels are word-level; the sentence id only preserves the source
// file's grouping. Feature columns are optional so both real and synthetic
// data flow through the same format. Immutable once loaded.
struct ParallelCorpus {
  Eigen::Index k = 0;
  std::vector<std::string> label_names;
  std::vector<std::string> label_set_names;     // one per noisy labeling
  std::vector<std::string> tokens;              // one per instance
  std::vector<int> sentence;                    // sentence id per instance
  std::vector<int> clean;                       // clean label per instance
  std::vector<std::vector<int>> noisy;          // [label set][instance]
  Eigen::MatrixXd features;                     // instances x d, d may be 0

  Eigen::Index size() const { return static_cast<Eigen::Index>(clean.size()); }
  Eigen::Index feature_dim() const { return features.cols(); }
  int label_set_index(const std::string& name) const;  // throws InputError

  // All (clean, noisy) pairs for one label set.
  LabelPairSet label_pairs(int label_set) const;
};

// Column layout of a corpus TSV: token, clean tag, `noisy_sets` noisy tag
// columns, then optional float feature columns. When `labels` is nonempty it
// fixes the tag inventory; `closed` additionally rejects unseen tags.
// Otherwise tags get indices in order of first appearance.
struct TsvSchema {
  int noisy_sets = 1;
  std::vector<std::string> label_set_names;  // defaults to noisy1..noisyN
  std::vector<std::string> labels;
  bool closed = false;
};

ParallelCorpus load_tsv_corpus(const std::string& path, const TsvSchema& schema);
void write_tsv_corpus(const std::string& path, const ParallelCorpus& corpus);

// Generic two-column CSV (clean,noisy integer labels, optional header).
LabelPairSet read_pairs_csv(const std::string& path, Eigen::Index k);

// Transition matrix counted over every instance of the corpus — the
// whole-data approximation of the underlying noise process. Every class must
// occur as a clean label at least once.
NoiseMatrix empirical_noise_matrix(const ParallelCorpus& corpus, int label_set);

// Clean-label frequencies.
ClassPrior class_prior(const ParallelCorpus& corpus);

// Token-level classification quality of a noisy labeling against the clean
// labels. Precision/recall/F1 are micro-averaged with the designated
// non-entity class excluded from both predictions and gold positives.
struct QualityReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

// Core counting shared with model evaluation: `predicted` stands in for the
// noisy labels when scoring a labeling, or for argmax outputs when scoring a
// classifier. Pass excluded = nullopt to micro-average over all classes.
QualityReport micro_quality(std::span<const int> gold, std::span<const int> predicted,
                            std::optional<int> excluded);

QualityReport quality_report(const ParallelCorpus& corpus, int label_set,
                             int non_entity_class);

std::string to_json(const QualityReport& report);

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_CORPUS_HPP_
