#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dtwlvq/evaluation.hpp"

namespace dtwlvq {

struct ExperimentConfig {
  std::vector<std::string> datasets;
  std::vector<ClassifierKind> methods;
  int folds = 10;
  std::uint64_t seed = 1;
  HyperGrid grid;
  /// Prototypes per class; more than one entry sweeps k per method.
  std::vector<std::size_t> k_values{1};
  std::size_t max_epochs = 1000;
  std::size_t kmeans_max_iter = 50;
  std::size_t dba_max_iter = 50;
  std::string output_dir = "results";
  /// 0 = take DTWLVQ_WORKERS from the environment, else 1.
  int workers = 0;
  bool znormalize = false;
  bool strict_lengths = true;
};

/// Reads the JSON experiment configuration.
ExperimentConfig load_experiment_config(const std::string& path);

struct ExperimentOutcome {
  ResultsTable table;
  /// dataset x method cells that failed, with reasons.
  std::vector<std::string> failures;
};

/// Runs the full protocol: per dataset, stratified folds, one
/// select_and_test cell per method x fold (cells may run on a worker
/// pool; all artifacts are written by a single thread in a fixed order).
/// Writes <out>/<dataset>/<method>/fold<i>.json, <out>/table.csv and
/// <out>/report.json. Reruns with the same config produce byte-identical
/// artifacts. Returns the aggregate table and any cell failures.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

struct CompareReport {
  ResultsTable table;
  RankTable ranks;
  std::vector<std::vector<double>> winning;
  std::vector<std::vector<double>> mean_pct_diff;
};

/// Joins one or more accuracy CSVs on their dataset rows (same row set
/// required, order-insensitive; duplicate classifier names and row
/// mismatches are merge errors) and computes the comparison statistics.
CompareReport compare(const std::vector<std::string>& csv_paths);

/// Writes ranks.csv, winning.csv, mean_pct_diff.csv and report.json.
void write_compare_report(const CompareReport& report, const std::string& out_dir);

} // namespace dtwlvq
