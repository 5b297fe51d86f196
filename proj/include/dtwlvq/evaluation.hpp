#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dtwlvq/dataset.hpp"
#include "dtwlvq/lvq.hpp"

namespace dtwlvq {

/// Assignment of every example to one of `folds` folds (ids 1..folds).
struct FoldPlan {
  std::vector<int> fold_of;
  int folds;
  std::uint64_t seed;
  std::vector<std::string> warnings;

  std::vector<std::size_t> test_indices(int fold) const;
  std::vector<std::size_t> train_indices(int fold) const;
};

/// Stratified seeded fold assignment: per class the examples are shuffled
/// and dealt round-robin, so per-class counts across folds differ by at
/// most one. Classes smaller than the fold count produce a warning; a
/// training set losing a class entirely is a hard error (config_error).
FoldPlan make_folds(const LabeledDataset& D, int folds, std::uint64_t seed);

struct HyperGrid {
  std::vector<double> sigma{0.1, 0.5, 1.0, 5.0, 10.0, 25.0, 50.0};
  std::vector<double> eta{0.001, 0.0025, 0.005, 0.01, 0.025, 0.05, 0.1, 0.25, 0.5};
};

enum class ClassifierKind { OneNN, KMeans, Slvq, Alvq, Glvq };

std::string classifier_name(ClassifierKind kind);
ClassifierKind classifier_from_name(const std::string& name);

struct ProtocolSettings {
  std::size_t k = 1;
  std::size_t max_epochs = 1000;
  std::size_t kmeans_max_iter = 50;
  std::size_t dba_max_iter = 50;
  std::uint64_t kmeans_seed = 0;
  std::uint64_t train_seed = 0;
};

struct SelectAndTestResult {
  /// Accuracy on the held-out fold, in [0, 1].
  double fold_accuracy;
  /// Selected grid value; NaN for grid-free classifiers.
  double selected_value;
  /// Error rate of the selected model on the training set.
  double training_error;
  TrainReport report;
  std::size_t train_size;
  std::size_t test_size;
};

/// One cross-validation cell: trains on everything outside `fold`, runs
/// the grid search for the LVQ variants (prototypes initialized from
/// kmeans_per_class centroids, lowest training error wins, ties toward
/// the smaller grid value), and evaluates the chosen model on the fold.
SelectAndTestResult select_and_test(const LabeledDataset& D, const FoldPlan& plan, int fold,
                                    ClassifierKind kind, const HyperGrid& grid,
                                    const ProtocolSettings& settings);

/// Accuracy table in percent: rows = datasets, columns = classifiers.
struct ResultsTable {
  std::vector<std::string> datasets;
  std::vector<std::string> classifiers;
  std::vector<std::vector<double>> accuracy;
};

void validate(const ResultsTable& table);

struct RankTable {
  /// Competition ("1224") ranks per dataset row, descending accuracy.
  std::vector<std::vector<int>> ranks;
  /// rank_counts[c][r-1] = number of datasets where classifier c has rank r.
  std::vector<std::vector<int>> rank_counts;
  std::vector<double> average_rank;
  std::vector<double> std_rank_population;
  std::vector<double> std_rank_sample;
};

RankTable rank_table(const ResultsTable& table);

/// w[i][j] = 100 * |{datasets where classifier j is strictly worse than i}| / #datasets.
std::vector<std::vector<double>> winning_percentage(const ResultsTable& table);

/// a[i][j] = 100 * (2/#datasets) * sum over datasets of
/// (acc_i - acc_j)/(acc_i + acc_j). A zero denominator is a computation_error.
std::vector<std::vector<double>> mean_percentage_difference(const ResultsTable& table);

/// CSV round-trip: header row "dataset,<classifier>...", RFC 4180 quoting,
/// LF line endings, values round-tripping double precision.
ResultsTable read_results_csv(const std::string& path);
void write_results_csv(const ResultsTable& table, const std::string& path);

} // namespace dtwlvq
