// noise_oracle/corpus.cpp

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

#include "noise_oracle/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "noise_oracle/csv.hpp"

namespace noise_oracle {

int ParallelCorpus::label_set_index(const std::string& name) const {
  const auto it = std::find(label_set_names.begin(), label_set_names.end(), name);
  if (it == label_set_names.end())
    throw InputError("unknown label set: " + name);
  return static_cast<int>(it - label_set_names.begin());
}

LabelPairSet ParallelCorpus::label_pairs(int label_set) const {
  if (label_set < 0 || label_set >= static_cast<int>(noisy.size()))
    throw InputError("label set index out of range");
  LabelPairSet pairs{k, {}};
  pairs.pairs.reserve(clean.size());
  const auto& set = noisy[static_cast<std::size_t>(label_set)];
  for (std::size_t t = 0; t < clean.size(); ++t)
    pairs.pairs.push_back({clean[t], set[t]});
  return pairs;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

class TagInventory {
 public:
  TagInventory(const std::vector<std::string>& preset, bool closed)
      : closed_(closed) {
    for (const auto& name : preset) lookup(name, 0);
  }

  int lookup(const std::string& tag, std::size_t line_no) {
    const auto it = index_.find(tag);
    if (it != index_.end()) return it->second;
    if (closed_)
      throw InputError("line " + std::to_string(line_no) + ": unknown tag '" + tag +
                       "' (inventory is closed)");
    const int id = static_cast<int>(names_.size());
    names_.push_back(tag);
    index_.emplace(tag, id);
    return id;
  }

  std::vector<std::string> names() && { return std::move(names_); }

 private:
  bool closed_;
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
};

double parse_feature(const std::string& field, std::size_t line_no) {
  double value = 0.0;
  const auto r = std::from_chars(field.data(), field.data() + field.size(), value);
  if (r.ec != std::errc{} || r.ptr != field.data() + field.size())
    throw InputError("line " + std::to_string(line_no) + ": bad feature value '" +
                     field + "'");
  return value;
}

}  // namespace

ParallelCorpus load_tsv_corpus(const std::string& path, const TsvSchema& schema) {
  if (schema.noisy_sets < 1)
    throw InputError("schema must name at least one noisy column");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file: " + path);

  TagInventory inventory(schema.labels, schema.closed);
  ParallelCorpus corpus;
  corpus.noisy.resize(static_cast<std::size_t>(schema.noisy_sets));
  std::vector<std::vector<double>> feature_rows;

  std::string line;
  std::size_t line_no = 0;
  int sentence_id = 0;
  bool sentence_open = false;
  int feature_dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (sentence_open) ++sentence_id;
      sentence_open = false;
      continue;
    }
    const auto fields = split_tabs(line);
    const int base_columns = 2 + schema.noisy_sets;
    if (static_cast<int>(fields.size()) < base_columns)
      throw InputError(path + ": line " + std::to_string(line_no) + ": expected at least " +
                       std::to_string(base_columns) + " columns, got " +
                       std::to_string(fields.size()));
    const int row_features = static_cast<int>(fields.size()) - base_columns;
    if (feature_dim < 0)
      feature_dim = row_features;
    else if (row_features != feature_dim)
      throw InputError(path + ": line " + std::to_string(line_no) + ": expected " +
                       std::to_string(base_columns + feature_dim) + " columns, got " +
                       std::to_string(fields.size()));

    corpus.tokens.push_back(fields[0]);
    corpus.sentence.push_back(sentence_id);
    sentence_open = true;
    corpus.clean.push_back(inventory.lookup(fields[1], line_no));
    for (int s = 0; s < schema.noisy_sets; ++s)
      corpus.noisy[static_cast<std::size_t>(s)].push_back(
          inventory.lookup(fields[static_cast<std::size_t>(2 + s)], line_no));
    std::vector<double> row(static_cast<std::size_t>(feature_dim));
    for (int f = 0; f < feature_dim; ++f)
      row[static_cast<std::size_t>(f)] =
          parse_feature(fields[static_cast<std::size_t>(base_columns + f)], line_no);
    feature_rows.push_back(std::move(row));
  }

  corpus.label_names = std::move(inventory).names();
  corpus.k = static_cast<Eigen::Index>(corpus.label_names.size());
  if (corpus.size() > 0 && corpus.k < 2)
    throw InputError(path + ": corpus uses fewer than two distinct labels");

  corpus.label_set_names = schema.label_set_names;
  if (corpus.label_set_names.empty())
    for (int s = 1; s <= schema.noisy_sets; ++s)
      corpus.label_set_names.push_back("noisy" + std::to_string(s));
  if (static_cast<int>(corpus.label_set_names.size()) != schema.noisy_sets)
    throw InputError("schema label set names do not match the noisy column count");

  const auto rows = static_cast<Eigen::Index>(feature_rows.size());
  const Eigen::Index cols = feature_dim <= 0 ? 0 : feature_dim;
  corpus.features.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      corpus.features(r, c) =
          feature_rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return corpus;
}

void write_tsv_corpus(const std::string& path, const ParallelCorpus& corpus) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write corpus file: " + path);
  for (Eigen::Index t = 0; t < corpus.size(); ++t) {
    const auto i = static_cast<std::size_t>(t);
    if (t > 0 && corpus.sentence[i] != corpus.sentence[i - 1]) out << '\n';
    out << corpus.tokens[i] << '\t'
        << corpus.label_names[static_cast<std::size_t>(corpus.clean[i])];
    for (const auto& set : corpus.noisy)
      out << '\t' << corpus.label_names[static_cast<std::size_t>(set[i])];
    for (Eigen::Index f = 0; f < corpus.feature_dim(); ++f)
      out << '\t' << format_double(corpus.features(t, f));
    out << '\n';
  }
}

LabelPairSet read_pairs_csv(const std::string& path, Eigen::Index k) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pairs file: " + path);
  LabelPairSet s{k, {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.find_first_not_of("cleanoisy, ") == std::string::npos)
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": expected two comma-separated integers");
    int clean = 0, noisy = 0;
    const auto r1 = std::from_chars(line.data(), line.data() + comma, clean);
    const auto r2 =
        std::from_chars(line.data() + comma + 1, line.data() + line.size(), noisy);
    if (r1.ec != std::errc{} || r1.ptr != line.data() + comma || r2.ec != std::errc{} ||
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

NoiseMatrix empirical_noise_matrix(const ParallelCorpus& corpus, int label_set) {
  const NoiseEstimate estimate = estimate_noise_matrix(corpus.label_pairs(label_set));
  if (estimate.has_empty_rows()) {
    const auto missing = estimate.empty_rows.front();
    throw InputError(
        "class '" + corpus.label_names[static_cast<std::size_t>(missing)] +
        "' never occurs as a clean label; the whole-data matrix is incomplete");
  }
  return NoiseMatrix::from_rows(estimate.probs);
}

ClassPrior class_prior(const ParallelCorpus& corpus) {
  if (corpus.size() == 0) throw InputError("cannot compute a prior of an empty corpus");
  CountVector counts = CountVector::Zero(corpus.k);
  for (const int y : corpus.clean) ++counts(y);
  return ClassPrior::from_probs(counts.cast<double>() /
                                static_cast<double>(corpus.size()));
}

QualityReport micro_quality(std::span<const int> gold, std::span<const int> predicted,
                            std::optional<int> excluded) {
  if (gold.size() != predicted.size())
    throw InputError("micro_quality: sequence lengths differ");
  std::int64_t true_positive = 0, predicted_positive = 0, actual_positive = 0,
               correct = 0;
  for (std::size_t t = 0; t < gold.size(); ++t) {
    const bool match = gold[t] == predicted[t];
    correct += match;
    if (!excluded || predicted[t] != *excluded) ++predicted_positive;
    if (!excluded || gold[t] != *excluded) ++actual_positive;
    if (match && (!excluded || gold[t] != *excluded)) ++true_positive;
  }
  QualityReport report;
  report.precision = predicted_positive > 0
                         ? static_cast<double>(true_positive) /
                               static_cast<double>(predicted_positive)
                         : 0.0;
  report.recall = actual_positive > 0 ? static_cast<double>(true_positive) /
                                            static_cast<double>(actual_positive)
                                      : 0.0;
  report.f1 = report.precision + report.recall > 0.0
                  ? 2.0 * report.precision * report.recall /
                        (report.precision + report.recall)
                  : 0.0;
  report.accuracy =
      gold.empty() ? 0.0
                   : static_cast<double>(correct) / static_cast<double>(gold.size());
  return report;
}

QualityReport quality_report(const ParallelCorpus& corpus, int label_set,
                             int non_entity_class) {
  if (non_entity_class < 0 || non_entity_class >= corpus.k)
    throw InputError("non-entity class out of range");
  if (label_set < 0 || label_set >= static_cast<int>(corpus.noisy.size()))
    throw InputError("label set index out of range");
  return micro_quality(corpus.clean, corpus.noisy[static_cast<std::size_t>(label_set)],
                       non_entity_class);
}

std::string to_json(const QualityReport& report) {
  nlohmann::json j;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["accuracy"] = report.accuracy;
  return j.dump(2);
}

}  // namespace noise_oracle
