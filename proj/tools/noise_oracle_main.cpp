// tools/noise_oracle_main.cpp

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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noise_oracle/blobs.hpp"
#include "noise_oracle/corpus.hpp"
#include "noise_oracle/csv.hpp"
#include "noise_oracle/label_pairs.hpp"
#include "noise_oracle/manifest.hpp"
#include "noise_oracle/noise_matrix.hpp"
#include "noise_oracle/simulation.hpp"
#include "noise_oracle/theory.hpp"
#include "noise_oracle/training.hpp"
#include "noise_oracle/types.hpp"

namespace {

using nlohmann::json;
namespace no = noise_oracle;

// --------------------------------------------------------------------------
// Small parsing helpers.

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> values;
  for (const auto& item : split_list(text, ','))
    try {
      values.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw no::InputError("bad integer in list: '" + item + "'");
    }
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split_list(text, ','))
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw no::InputError("bad number in list: '" + item + "'");
    }
  return values;
}

// "0>1,1>2" -> {(0,1), (1,2)}
no::FlipSpec parse_flips(const std::string& text) {
  no::FlipSpec spec;
  for (const auto& item : split_list(text, ',')) {
    const auto arrow = item.find('>');
    if (arrow == std::string::npos)
      throw no::InputError("bad flip '" + item + "', expected source>target");
    try {
      spec.mapping.emplace_back(std::stoi(item.substr(0, arrow)),
                                std::stoi(item.substr(arrow + 1)));
    } catch (const std::exception&) {
      throw no::InputError("bad flip '" + item + "'");
    }
  }
  return spec;
}

std::vector<int> read_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw no::InputError("cannot open labels file: " + path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      labels.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw no::InputError(path + ":" + std::to_string(line_no) + ": bad label");
    }
  }
  return labels;
}

// --------------------------------------------------------------------------
// Manifest-driven execution. Flags only build the manifest; everything below
// reads parameters back out of it, so saved manifests replay exactly.

struct Runtime {
  int threads = 1;
};

std::string out_path(const no::Manifest& manifest, const std::string& name) {
  return (std::filesystem::path(manifest.out_dir) / name).string();
}

std::string param_path(const no::Manifest& manifest, const std::string& key,
                       const std::string& default_name) {
  if (manifest.params.contains(key) &&
      !manifest.params.at(key).get<std::string>().empty())
    return manifest.params.at(key).get<std::string>();
  return out_path(manifest, default_name);
}

std::uint64_t require_seed(const no::Manifest& manifest) {
  if (!manifest.seed)
    throw no::InputError("command '" + manifest.command + "' requires --seed");
  return *manifest.seed;
}

no::NoiseMatrix generate_matrix(const json& params) {
  const auto kind = params.at("kind").get<std::string>();
  const auto epsilon = params.at("epsilon").get<double>();
  if (kind == "uniform")
    return no::uniform_noise(params.at("k").get<Eigen::Index>(), epsilon);
  if (kind == "single-flip") {
    no::FlipSpec spec;
    for (const auto& pair : params.value("flips", json::array()))
      spec.mapping.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    if (spec.mapping.empty()) throw no::InputError("single-flip noise needs --flips");
    return no::single_flip_noise(params.at("k").get<Eigen::Index>(), epsilon, spec);
  }
  if (kind == "multi-flip-mnist") return no::multi_flip_mnist(epsilon);
  throw no::InputError("unknown noise kind: " + kind);
}

// Matrix from either a file ("matrix") or a generator spec ("kind", ...).
no::NoiseMatrix resolve_matrix(const json& params) {
  if (params.contains("matrix"))
    return no::read_noise_matrix(params.at("matrix").get<std::string>());
  if (params.contains("kind")) return generate_matrix(params);
  throw no::InputError("need either --matrix or --kind");
}

no::ClassPrior resolve_prior(const json& params, Eigen::Index k) {
  const auto spec = params.value("prior", std::string("uniform"));
  if (spec == "uniform") return no::ClassPrior::uniform(k);
  std::ifstream in(spec);
  if (!in) throw no::InputError("cannot open prior file: " + spec);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw no::InputError("prior parse error: " + std::string(e.what()));
  }
  const auto& probs = j.contains("probs") ? j.at("probs") : j;
  no::Vector p(static_cast<Eigen::Index>(probs.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i)
    p(i) = probs.at(static_cast<std::size_t>(i)).get<double>();
  if (p.size() != k)
    throw no::InputError("prior has length " + std::to_string(p.size()) +
                         ", expected " + std::to_string(k));
  return no::ClassPrior::from_probs(std::move(p));
}

no::TsvSchema schema_from_params(const json& params) {
  no::TsvSchema schema;
  schema.noisy_sets = params.value("noisy_sets", 1);
  if (params.contains("inventory"))
    for (const auto& tag : params.at("inventory"))
      schema.labels.push_back(tag.get<std::string>());
  schema.closed = params.value("closed", false);
  return schema;
}

no::ParallelCorpus load_corpus_from_params(const json& params, const std::string& key) {
  return no::load_tsv_corpus(params.at(key).get<std::string>(),
                             schema_from_params(params));
}

int resolve_label_set(const no::ParallelCorpus& corpus, const json& params) {
  return corpus.label_set_index(params.value("label_set", std::string("noisy1")));
}

std::string estimate_to_json(const no::NoiseEstimate& estimate) {
  json j;
  j["k"] = estimate.probs.rows();
  auto rows = json::array();
  for (Eigen::Index i = 0; i < estimate.probs.rows(); ++i) {
    auto row = json::array();
    for (Eigen::Index c = 0; c < estimate.probs.cols(); ++c)
      row.push_back(estimate.probs(i, c));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["empty_rows"] = estimate.empty_rows;
  return j.dump(2);
}

no::NoiseEstimate estimate_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw no::InputError("cannot open estimate file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw no::InputError("estimate parse error: " + std::string(e.what()));
  }
  try {
    no::NoiseEstimate estimate;
    const auto k = j.at("k").get<Eigen::Index>();
    estimate.probs = no::Matrix::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index c = 0; c < k; ++c)
        estimate.probs(i, c) = j.at("rows").at(i).at(c).get<double>();
    for (const auto& row : j.value("empty_rows", json::array()))
      estimate.empty_rows.push_back(row.get<Eigen::Index>());
    return estimate;
  } catch (const json::exception& e) {
    throw no::InputError("bad estimate file: " + std::string(e.what()));
  }
}

// ---- command runners ------------------------------------------------------

void run_gen_noise(const no::Manifest& manifest, const Runtime&) {
  const no::NoiseMatrix matrix = generate_matrix(manifest.params);
  no::write_noise_matrix(param_path(manifest, "out", "matrix.json"), matrix);
}

void run_corrupt(const no::Manifest& manifest, const Runtime&) {
  const auto matrix =
      no::read_noise_matrix(manifest.params.at("matrix").get<std::string>());
  const auto labels = read_label_file(manifest.params.at("labels").get<std::string>());
  no::Rng rng(require_seed(manifest));
  const auto noisy = no::corrupt_labels(labels, matrix, rng);
  if (manifest.params.value("pairs", false)) {
    no::LabelPairSet pairs{matrix.k(), {}};
    for (std::size_t t = 0; t < labels.size(); ++t)
      pairs.pairs.push_back({labels[t], noisy[t]});
    no::write_pairs_tsv(param_path(manifest, "out", "pairs.tsv"), pairs);
  } else {
    const auto path = param_path(manifest, "out", "noisy_labels.txt");
    std::ofstream out(path);
    if (!out) throw no::InputError("cannot write labels file: " + path);
    for (const int y : noisy) out << y << '\n';
  }
}

void run_estimate(const no::Manifest& manifest, const Runtime&) {
  const auto k = manifest.params.at("k").get<Eigen::Index>();
  const auto pairs = no::read_pairs_tsv(manifest.params.at("pairs").get<std::string>(), k);
  const auto estimate = no::estimate_noise_matrix(pairs);
  const auto path = param_path(manifest, "out", "estimate.json");
  std::ofstream out(path);
  if (!out) throw no::InputError("cannot write estimate file: " + path);
  out << estimate_to_json(estimate) << '\n';
}

void run_expected_error(const no::Manifest& manifest, const Runtime&) {
  const json& params = manifest.params;
  const auto scheme = params.value("scheme", std::string("fixed"));
  if (scheme != "fixed" && scheme != "variable")
    throw no::InputError("scheme must be fixed or variable");
  std::vector<no::ErrorCurvePoint> curve;
  if (params.contains("eps_grid")) {
    const auto epsilons = params.at("eps_grid").get<std::vector<double>>();
    const auto size = params.at("size").get<std::int64_t>();
    json generator_params = params;
    auto generator = [&generator_params](double eps) {
      generator_params["epsilon"] = eps;
      return generate_matrix(generator_params);
    };
    if (scheme == "variable") {
      const auto prior = resolve_prior(params, generator(epsilons.front()).k());
      curve = no::error_curve_noise_levels(generator, epsilons, size, &prior);
    } else {
      curve = no::error_curve_noise_levels(generator, epsilons, size);
    }
  } else {
    const no::NoiseMatrix matrix = resolve_matrix(params);
    const auto sizes = params.at("sizes").get<std::vector<std::int64_t>>();
    if (scheme == "variable") {
      const auto prior = resolve_prior(params, matrix.k());
      for (const auto i :
           no::expected_error_variable(matrix, prior, sizes.front()).high_empty_risk)
        std::cerr << "warning: class " << i
                  << " is likely to go unsampled at the smallest grid size; the "
                     "closed form deviates from simulation there\n";
      curve = no::error_curve_variable_sizes(matrix, prior, sizes);
    } else {
      curve = no::error_curve_fixed_sizes(matrix, sizes);
    }
  }
  no::write_error_curve_csv(out_path(manifest, "expected_error.csv"), curve);
}

no::SimulationConfig simulation_config(const no::Manifest& manifest,
                                       const Runtime& runtime) {
  const json& params = manifest.params;

  no::SimulationSource source = [&]() -> no::SimulationSource {
    if (params.contains("corpus")) {
      const auto corpus = load_corpus_from_params(params, "corpus");
      const int set = resolve_label_set(corpus, params);
      return no::CorpusSource{corpus.label_pairs(set),
                              no::empirical_noise_matrix(corpus, set),
                              no::class_prior(corpus)};
    }
    const no::NoiseMatrix matrix = resolve_matrix(params);
    auto prior = resolve_prior(params, matrix.k());
    return no::SyntheticSource{matrix, std::move(prior)};
  }();

  const Eigen::Index classes =
      std::holds_alternative<no::SyntheticSource>(source)
          ? std::get<no::SyntheticSource>(source).matrix.k()
          : std::get<no::CorpusSource>(source).reference.k();
  const auto scheme_name = params.value("scheme", std::string("fixed"));
  no::SamplingScheme scheme;
  if (scheme_name == "fixed") {
    scheme = no::FixedScheme{
        no::CountVector::Constant(classes, params.at("ni").get<std::int64_t>())};
  } else if (scheme_name == "variable") {
    scheme = no::VariableScheme{params.at("n").get<std::int64_t>()};
  } else {
    throw no::InputError("scheme must be fixed or variable");
  }

  return no::SimulationConfig{
      .repetitions = params.value("reps", std::int64_t{500}),
      .scheme = std::move(scheme),
      .source = std::move(source),
      .master_seed = require_seed(manifest),
      .replacement = params.value("without_replacement", false)
                         ? no::Replacement::kWithout
                         : no::Replacement::kWith,
      .keep_per_repetition = false,
      .threads = runtime.threads};
}

void run_simulate(const no::Manifest& manifest, const Runtime& runtime) {
  const auto config = simulation_config(manifest, runtime);
  const auto result = no::run_simulation(config);
  const double grid_value =
      std::holds_alternative<no::FixedScheme>(config.scheme)
          ? static_cast<double>(std::get<no::FixedScheme>(config.scheme).per_class(0))
          : static_cast<double>(std::get<no::VariableScheme>(config.scheme).n);
  no::write_sweep_csv(out_path(manifest, "simulation.csv"), {{grid_value, result}});
}

void run_sweep(const no::Manifest& manifest, const Runtime& runtime) {
  const json& params = manifest.params;
  const auto config = simulation_config(manifest, runtime);
  std::vector<no::SweepRow> rows;
  if (params.contains("eps_grid")) {
    json generator_params = params;
    rows = no::sweep(
        config, no::NoiseLevelGrid{[&generator_params](double eps) {
                                     generator_params["epsilon"] = eps;
                                     return generate_matrix(generator_params);
                                   },
                                   params.at("eps_grid").get<std::vector<double>>()});
  } else if (params.contains("sizes")) {
    rows = no::sweep(
        config, no::SampleSizeGrid{params.at("sizes").get<std::vector<std::int64_t>>()});
  } else {
    throw no::InputError("sweep needs --sizes or --eps-grid");
  }
  no::write_sweep_csv(out_path(manifest, "sweep.csv"), rows);
}

int tag_index(const no::ParallelCorpus& corpus, const std::string& tag) {
  const auto it = std::find(corpus.label_names.begin(), corpus.label_names.end(), tag);
  if (it == corpus.label_names.end())
    throw no::InputError("tag '" + tag + "' not in the corpus inventory");
  return static_cast<int>(it - corpus.label_names.begin());
}

void run_quality(const no::Manifest& manifest, const Runtime&) {
  const json& params = manifest.params;
  const auto corpus = load_corpus_from_params(params, "corpus");
  const int set = resolve_label_set(corpus, params);
  const auto report = no::quality_report(
      corpus, set, tag_index(corpus, params.at("non_entity").get<std::string>()));
  const auto path = out_path(manifest, "quality.json");
  std::ofstream out(path);
  if (!out) throw no::InputError("cannot write report: " + path);
  out << no::to_json(report) << '\n';
}

// Shared by train and correlate.
no::TrainConfig train_config_from_params(const json& params, std::uint64_t seed) {
  no::TrainConfig config;
  config.epochs = params.value("epochs", 30);
  config.learning_rate = params.value("lr", 0.5);
  config.batch_size = params.value("batch", 32);
  config.noisy_multiplier = params.value("multiplier", 15.0);
  config.log_epsilon = params.value("log_epsilon", 1e-12);
  config.seed = seed;
  return config;
}

void run_train(const no::Manifest& manifest, const Runtime&) {
  const json& params = manifest.params;
  const auto seed = require_seed(manifest);
  const auto corpus = load_corpus_from_params(params, "corpus");
  const int set = resolve_label_set(corpus, params);
  if (corpus.feature_dim() == 0)
    throw no::InputError("training needs feature columns in the corpus");

  const no::TrainingSet clean_pool{corpus.features, corpus.clean};
  const no::TrainingSet noisy_pool{corpus.features,
                                   corpus.noisy[static_cast<std::size_t>(set)]};

  // D_C: a per-class or total sample of the pool, or the whole pool.
  no::Rng sample_rng(no::child_seed(seed, 1));
  std::vector<Eigen::Index> clean_indices;
  if (params.contains("clean_ni")) {
    const auto per_class =
        no::CountVector::Constant(corpus.k, params.at("clean_ni").get<std::int64_t>());
    clean_indices = no::sample_fixed_indices(clean_pool.labels, per_class, sample_rng);
  } else if (params.contains("clean_n")) {
    clean_indices = no::sample_variable_indices(
        clean_pool.size(), params.at("clean_n").get<std::int64_t>(), sample_rng);
  } else {
    clean_indices.resize(static_cast<std::size_t>(clean_pool.size()));
    for (std::size_t t = 0; t < clean_indices.size(); ++t)
      clean_indices[t] = static_cast<Eigen::Index>(t);
  }
  no::TrainingSet clean_data;
  clean_data.features.resize(static_cast<Eigen::Index>(clean_indices.size()),
                             clean_pool.dim());
  for (std::size_t t = 0; t < clean_indices.size(); ++t) {
    clean_data.features.row(static_cast<Eigen::Index>(t)) =
        clean_pool.features.row(clean_indices[t]);
    clean_data.labels.push_back(
        clean_pool.labels[static_cast<std::size_t>(clean_indices[t])]);
  }

  std::optional<no::NoiseEstimate> estimate;
  if (params.contains("estimate")) {
    estimate = estimate_from_file(params.at("estimate").get<std::string>());
  } else if (params.contains("matrix")) {
    const auto matrix = no::read_noise_matrix(params.at("matrix").get<std::string>());
    estimate = no::NoiseEstimate{matrix.probs(), {}};
  } else if (params.value("estimate_from_sample", false)) {
    no::LabelPairSet pairs{corpus.k, {}};
    for (const auto src : clean_indices)
      pairs.pairs.push_back(
          {corpus.clean[static_cast<std::size_t>(src)],
           corpus.noisy[static_cast<std::size_t>(set)][static_cast<std::size_t>(src)]});
    estimate = no::estimate_noise_matrix(pairs);
  }

  std::optional<no::TrainingSet> dev;
  if (params.contains("dev")) {
    const auto dev_corpus = load_corpus_from_params(params, "dev");
    dev = no::TrainingSet{dev_corpus.features, dev_corpus.clean};
  }

  const auto config = train_config_from_params(params, no::child_seed(seed, 2));
  const auto result =
      no::train(no::LinearSoftmaxModel::zeros(corpus.k, corpus.feature_dim()),
                clean_data, noisy_pool, estimate ? &*estimate : nullptr, config,
                dev ? &*dev : nullptr);
  for (const auto row : result.substituted_rows)
    std::cerr << "note: estimate row " << row
              << " was empty; trained through a uniform row\n";

  no::write_model(out_path(manifest, "model.json"), result.model);
  const auto trace_path = out_path(manifest, "trace.csv");
  std::ofstream trace(trace_path);
  if (!trace) throw no::InputError("cannot write trace: " + trace_path);
  trace << "epoch,clean_loss,noisy_loss\n";
  for (std::size_t e = 0; e < result.clean_loss.size(); ++e)
    trace << e << ',' << no::format_double(result.clean_loss[e]) << ','
          << no::format_double(result.noisy_loss[e]) << '\n';
}

void run_eval(const no::Manifest& manifest, const Runtime&) {
  const json& params = manifest.params;
  require_seed(manifest);  // mandatory across the experiment commands
  const auto corpus = load_corpus_from_params(params, "corpus");
  const auto model = no::read_model(params.at("model").get<std::string>());
  if (corpus.feature_dim() != model.dim())
    throw no::InputError("corpus features do not match the model dimension");
  std::optional<int> non_entity;
  if (params.contains("non_entity"))
    non_entity = tag_index(corpus, params.at("non_entity").get<std::string>());
  const auto result =
      no::evaluate(model, no::TrainingSet{corpus.features, corpus.clean}, non_entity);
  json j;
  j["accuracy"] = result.accuracy;
  j["micro_f1_excl"] = result.micro_f1_excl;
  auto per_class = json::array();
  for (Eigen::Index c = 0; c < result.per_class_f1.size(); ++c)
    per_class.push_back(result.per_class_f1(c));
  j["per_class_f1"] = std::move(per_class);
  const auto path = out_path(manifest, "metrics.json");
  std::ofstream out(path);
  if (!out) throw no::InputError("cannot write metrics: " + path);
  out << j.dump(2) << '\n';
}

void run_correlate(const no::Manifest& manifest, const Runtime& runtime) {
  const json& params = manifest.params;
  const auto seed = require_seed(manifest);

  no::CorrelationConfig config;
  config.scheme = params.value("scheme", std::string("fixed")) == "variable"
                      ? no::SchemeKind::kVariable
                      : no::SchemeKind::kFixed;
  config.grid = params.at("grid").get<std::vector<std::int64_t>>();
  config.repetitions = params.value("reps", 20);
  config.master_seed = seed;
  if (params.contains("fix_base_clean"))
    config.fix_base_clean = params.at("fix_base_clean").get<std::int64_t>();
  config.train_config = train_config_from_params(params, 0);
  config.threads = runtime.threads;
  if (params.contains("metric_non_entity"))
    config.metric_non_entity = params.at("metric_non_entity").get<int>();

  const no::CorrelationSource source = [&] {
    if (params.value("blobs", false)) {
      no::BlobsSpec spec;
      spec.k = params.value("blob_k", Eigen::Index{3});
      const auto noise = no::uniform_noise(spec.k, params.value("blob_eps", 0.6));
      const auto benchmark = no::make_blobs_benchmark(
          spec, params.value("blob_pool", Eigen::Index{3000}),
          params.value("blob_test", Eigen::Index{2000}), noise,
          params.value("blob_seed", std::uint64_t{7}));
      return no::CorrelationSource{benchmark.pool, benchmark.pool_noisy,
                                   benchmark.test, benchmark.noise, benchmark.prior};
    }
    const auto corpus = load_corpus_from_params(params, "corpus");
    const int set = resolve_label_set(corpus, params);
    if (corpus.feature_dim() == 0)
      throw no::InputError("correlate needs feature columns in the corpus");
    const auto test_corpus = load_corpus_from_params(params, "test");
    return no::CorrelationSource{
        no::TrainingSet{corpus.features, corpus.clean},
        corpus.noisy[static_cast<std::size_t>(set)],
        no::TrainingSet{test_corpus.features, test_corpus.clean},
        no::empirical_noise_matrix(corpus, set), no::class_prior(corpus)};
  }();

  const auto result = no::correlation_experiment(source, config);
  no::write_correlation_csv(out_path(manifest, "correlation.csv"), result);
}

void run_manifest(const no::Manifest& manifest, const Runtime& runtime) {
  std::filesystem::create_directories(manifest.out_dir);
  no::write_manifest(out_path(manifest, "manifest.json"), manifest);
  if (manifest.command == "gen-noise") return run_gen_noise(manifest, runtime);
  if (manifest.command == "corrupt") return run_corrupt(manifest, runtime);
  if (manifest.command == "estimate") return run_estimate(manifest, runtime);
  if (manifest.command == "expected-error")
    return run_expected_error(manifest, runtime);
  if (manifest.command == "simulate") return run_simulate(manifest, runtime);
  if (manifest.command == "sweep") return run_sweep(manifest, runtime);
  if (manifest.command == "quality") return run_quality(manifest, runtime);
  if (manifest.command == "train") return run_train(manifest, runtime);
  if (manifest.command == "eval") return run_eval(manifest, runtime);
  if (manifest.command == "correlate") return run_correlate(manifest, runtime);
  throw no::InputError("unknown command: " + manifest.command);
}

// --------------------------------------------------------------------------
// Flag surface. Each subcommand compiles its flags into manifest params.

struct CliState {
  no::Manifest manifest;
  Runtime runtime;
  std::string manifest_path;
  std::uint64_t seed = 0;
};

void add_corpus_flags(CLI::App* cmd, CliState& state) {
  cmd->add_option_function<std::string>(
      "--corpus",
      [&state](const std::string& v) { state.manifest.params["corpus"] = v; },
      "corpus TSV path");
  cmd->add_option_function<int>(
      "--noisy-sets",
      [&state](int v) { state.manifest.params["noisy_sets"] = v; },
      "number of noisy tag columns (default 1)");
  cmd->add_option_function<std::string>(
      "--inventory",
      [&state](const std::string& v) {
        auto tags = json::array();
        for (const auto& tag : split_list(v, ',')) tags.push_back(tag);
        state.manifest.params["inventory"] = std::move(tags);
      },
      "comma-separated tag inventory fixing label order");
  cmd->add_flag_function(
      "--closed",
      [&state](std::int64_t) { state.manifest.params["closed"] = true; },
      "reject tags outside the inventory");
  cmd->add_option_function<std::string>(
      "--label-set",
      [&state](const std::string& v) { state.manifest.params["label_set"] = v; },
      "noisy label set name (default noisy1)");
}

void add_matrix_source_flags(CLI::App* cmd, CliState& state) {
  cmd->add_option_function<std::string>(
      "--matrix",
      [&state](const std::string& v) { state.manifest.params["matrix"] = v; },
      "noise matrix JSON path");
  cmd->add_option_function<std::string>(
      "--kind",
      [&state](const std::string& v) { state.manifest.params["kind"] = v; },
      "uniform | single-flip | multi-flip-mnist");
  cmd->add_option_function<Eigen::Index>(
      "--k", [&state](Eigen::Index v) { state.manifest.params["k"] = v; },
      "class count");
  cmd->add_option_function<double>(
      "--epsilon", [&state](double v) { state.manifest.params["epsilon"] = v; },
      "noise level");
  cmd->add_option_function<std::string>(
      "--flips",
      [&state](const std::string& v) {
        auto flips = json::array();
        for (const auto& [s, t] : parse_flips(v).mapping)
          flips.push_back(json::array({s, t}));
        state.manifest.params["flips"] = std::move(flips);
      },
      "single-flip pattern, e.g. 0>1,1>2");
}

void add_train_flags(CLI::App* cmd, CliState& state) {
  cmd->add_option_function<int>(
      "--epochs", [&state](int v) { state.manifest.params["epochs"] = v; });
  cmd->add_option_function<double>(
      "--lr", [&state](double v) { state.manifest.params["lr"] = v; });
  cmd->add_option_function<int>(
      "--batch", [&state](int v) { state.manifest.params["batch"] = v; });
  cmd->add_option_function<double>(
      "--multiplier",
      [&state](double v) { state.manifest.params["multiplier"] = v; },
      "noisy subset size as a multiple of |D_C|");
  cmd->add_option_function<double>(
      "--log-epsilon",
      [&state](double v) { state.manifest.params["log_epsilon"] = v; });
}

int run_cli(int argc, char** argv) {
  CliState state;
  CLI::App app{"noise transition matrix estimation, its expected error, and "
               "noise-adapted training"};
  app.require_subcommand(0, 1);
  app.add_option("--seed", state.seed, "master seed for stochastic commands");
  app.add_option("--out-dir", state.manifest.out_dir, "output directory");
  app.add_option("--threads", state.runtime.threads,
                 "worker threads (or env NOISE_ORACLE_THREADS)");
  app.add_option("--manifest", state.manifest_path,
                 "run a saved manifest instead of flags");

  auto* gen = app.add_subcommand("gen-noise", "generate a synthetic noise matrix");
  add_matrix_source_flags(gen, state);
  gen->add_option_function<std::string>(
      "--out", [&state](const std::string& v) { state.manifest.params["out"] = v; },
      "matrix output path (default <out-dir>/matrix.json)");

  auto* corrupt = app.add_subcommand("corrupt", "apply a noise process to labels");
  corrupt->add_option_function<std::string>(
      "--matrix",
      [&state](const std::string& v) { state.manifest.params["matrix"] = v; });
  corrupt->add_option_function<std::string>(
      "--labels",
      [&state](const std::string& v) { state.manifest.params["labels"] = v; },
      "file with one integer label per line");
  corrupt->add_flag_function(
      "--pairs", [&state](std::int64_t) { state.manifest.params["pairs"] = true; },
      "emit clean/noisy pairs TSV instead of bare labels");
  corrupt->add_option_function<std::string>(
      "--out", [&state](const std::string& v) { state.manifest.params["out"] = v; });

  auto* estimate = app.add_subcommand("estimate", "estimate a matrix from pairs");
  estimate->add_option_function<std::string>(
      "--pairs",
      [&state](const std::string& v) { state.manifest.params["pairs"] = v; },
      "TSV with clean<TAB>noisy integer pairs");
  estimate->add_option_function<Eigen::Index>(
      "--k", [&state](Eigen::Index v) { state.manifest.params["k"] = v; });
  estimate->add_option_function<std::string>(
      "--out", [&state](const std::string& v) { state.manifest.params["out"] = v; });

  auto* expected =
      app.add_subcommand("expected-error", "closed-form expected estimation error");
  add_matrix_source_flags(expected, state);
  expected->add_option_function<std::string>(
      "--scheme",
      [&state](const std::string& v) { state.manifest.params["scheme"] = v; },
      "fixed | variable");
  expected->add_option_function<std::string>(
      "--sizes",
      [&state](const std::string& v) {
        state.manifest.params["sizes"] = parse_int_list(v);
      },
      "sample-size grid, e.g. 10,20,40");
  expected->add_option_function<std::string>(
      "--eps-grid",
      [&state](const std::string& v) {
        state.manifest.params["eps_grid"] = parse_double_list(v);
      },
      "noise-level grid (regenerates the matrix per point)");
  expected->add_option_function<std::int64_t>(
      "--size", [&state](std::int64_t v) { state.manifest.params["size"] = v; },
      "sample size used with --eps-grid");
  expected->add_option_function<std::string>(
      "--prior",
      [&state](const std::string& v) { state.manifest.params["prior"] = v; },
      "'uniform' or a JSON file with {\"probs\": [...]}");

  const auto add_sim_flags = [&state](CLI::App* cmd) {
    cmd->add_option_function<std::string>(
        "--prior",
        [&state](const std::string& v) { state.manifest.params["prior"] = v; });
    cmd->add_option_function<std::string>(
        "--scheme",
        [&state](const std::string& v) { state.manifest.params["scheme"] = v; });
    cmd->add_option_function<std::int64_t>(
        "--ni", [&state](std::int64_t v) { state.manifest.params["ni"] = v; },
        "per-class count for fixed sampling");
    cmd->add_option_function<std::int64_t>(
        "--n", [&state](std::int64_t v) { state.manifest.params["n"] = v; },
        "total count for variable sampling");
    cmd->add_option_function<std::int64_t>(
        "--reps", [&state](std::int64_t v) { state.manifest.params["reps"] = v; });
    cmd->add_flag_function("--without-replacement", [&state](std::int64_t) {
      state.manifest.params["without_replacement"] = true;
    });
  };

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimation error");
  add_matrix_source_flags(simulate, state);
  add_corpus_flags(simulate, state);
  add_sim_flags(simulate);

  auto* sweep_cmd = app.add_subcommand("sweep", "simulate across a grid");
  add_matrix_source_flags(sweep_cmd, state);
  add_corpus_flags(sweep_cmd, state);
  add_sim_flags(sweep_cmd);
  sweep_cmd->add_option_function<std::string>(
      "--sizes", [&state](const std::string& v) {
        state.manifest.params["sizes"] = parse_int_list(v);
      });
  sweep_cmd->add_option_function<std::string>(
      "--eps-grid", [&state](const std::string& v) {
        state.manifest.params["eps_grid"] = parse_double_list(v);
      });

  auto* quality = app.add_subcommand("quality", "score a noisy labeling");
  add_corpus_flags(quality, state);
  quality->add_option_function<std::string>(
      "--non-entity",
      [&state](const std::string& v) { state.manifest.params["non_entity"] = v; },
      "background tag excluded from the micro-average");

  auto* train_cmd = app.add_subcommand("train", "train the base model");
  add_corpus_flags(train_cmd, state);
  add_train_flags(train_cmd, state);
  train_cmd->add_option_function<std::string>(
      "--dev", [&state](const std::string& v) { state.manifest.params["dev"] = v; },
      "clean dev corpus for epoch selection");
  train_cmd->add_option_function<std::string>(
      "--matrix",
      [&state](const std::string& v) { state.manifest.params["matrix"] = v; },
      "fixed noise matrix JSON for the noise layer");
  train_cmd->add_option_function<std::string>(
      "--estimate",
      [&state](const std::string& v) { state.manifest.params["estimate"] = v; },
      "estimate JSON (possibly with empty rows) for the noise layer");
  train_cmd->add_flag_function(
      "--estimate-from-sample",
      [&state](std::int64_t) { state.manifest.params["estimate_from_sample"] = true; },
      "estimate the noise layer from the sampled clean subset");
  train_cmd->add_option_function<std::int64_t>(
      "--clean-ni",
      [&state](std::int64_t v) { state.manifest.params["clean_ni"] = v; },
      "sample D_C with this per-class count");
  train_cmd->add_option_function<std::int64_t>(
      "--clean-n",
      [&state](std::int64_t v) { state.manifest.params["clean_n"] = v; },
      "sample D_C with this total count");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a trained model");
  add_corpus_flags(eval_cmd, state);
  eval_cmd->add_option_function<std::string>(
      "--model",
      [&state](const std::string& v) { state.manifest.params["model"] = v; });
  eval_cmd->add_option_function<std::string>(
      "--non-entity",
      [&state](const std::string& v) { state.manifest.params["non_entity"] = v; });

  auto* correlate = app.add_subcommand(
      "correlate", "estimation error vs downstream test performance");
  add_corpus_flags(correlate, state);
  add_train_flags(correlate, state);
  correlate->add_option_function<std::string>(
      "--test", [&state](const std::string& v) { state.manifest.params["test"] = v; },
      "clean test corpus (corpus mode)");
  correlate->add_flag_function(
      "--blobs", [&state](std::int64_t) { state.manifest.params["blobs"] = true; },
      "use the built-in Gaussian-blobs benchmark");
  correlate->add_option_function<double>(
      "--blob-eps", [&state](double v) { state.manifest.params["blob_eps"] = v; });
  correlate->add_option_function<Eigen::Index>(
      "--blob-pool",
      [&state](Eigen::Index v) { state.manifest.params["blob_pool"] = v; });
  correlate->add_option_function<Eigen::Index>(
      "--blob-test",
      [&state](Eigen::Index v) { state.manifest.params["blob_test"] = v; });
  correlate->add_option_function<std::uint64_t>(
      "--blob-seed",
      [&state](std::uint64_t v) { state.manifest.params["blob_seed"] = v; });
  correlate->add_option_function<std::string>(
      "--scheme",
      [&state](const std::string& v) { state.manifest.params["scheme"] = v; });
  correlate->add_option_function<std::string>(
      "--grid",
      [&state](const std::string& v) {
        state.manifest.params["grid"] = parse_int_list(v);
      },
      "n_i grid (fixed) or n grid (variable)");
  correlate->add_option_function<int>(
      "--reps", [&state](int v) { state.manifest.params["reps"] = v; });
  correlate->add_option_function<std::int64_t>(
      "--fix-base-clean",
      [&state](std::int64_t v) { state.manifest.params["fix_base_clean"] = v; },
      "train the base model on this fixed clean budget");
  correlate->add_option_function<int>(
      "--metric-non-entity",
      [&state](int v) { state.manifest.params["metric_non_entity"] = v; },
      "report micro-F1 excluding this class index instead of accuracy");

  // Global flags may follow the subcommand.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (const char* env = std::getenv("NOISE_ORACLE_THREADS");
      env && app.count("--threads") == 0) {
    try {
      state.runtime.threads = std::stoi(env);
    } catch (const std::exception&) {
      throw no::InputError("NOISE_ORACLE_THREADS is not an integer");
    }
  }
  if (state.runtime.threads < 1) state.runtime.threads = 1;

  if (!state.manifest_path.empty()) {
    no::Manifest loaded = no::read_manifest(state.manifest_path);
    if (app.count("--out-dir") > 0) loaded.out_dir = state.manifest.out_dir;
    if (app.count("--seed") > 0) loaded.seed = state.seed;
    run_manifest(loaded, state.runtime);
    return 0;
  }

  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }
  state.manifest.command = app.get_subcommands().front()->get_name();
  if (app.count("--seed") > 0) state.manifest.seed = state.seed;
  run_manifest(state.manifest, state.runtime);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const no::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
