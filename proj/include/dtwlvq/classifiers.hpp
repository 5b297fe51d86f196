#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dtwlvq/dataset.hpp"
#include "dtwlvq/lvq.hpp"
#include "dtwlvq/timeseries.hpp"

namespace dtwlvq {

/// Label of the nearest prototype.
int classify(const Codebook& cb, const TimeSeries& x);

/// Fraction of examples of D classified correctly by cb, in [0, 1].
double accuracy(const Codebook& cb, const LabeledDataset& D);

struct KmeansClassTrace {
  int label;
  /// Objective sum dtw^2(x, nearest centroid) after each full
  /// (assignment, update) round; entry 0 is the objective of the
  /// initial centroids.
  std::vector<double> objective;
  /// Final cluster of each class member, empty when k == 1.
  std::vector<std::size_t> assignment;
};

struct KmeansResult {
  Codebook codebook;
  std::vector<KmeansClassTrace> traces;
};

/// Per-class prototype generation: k = 1 yields the DBA mean of the class
/// (medoid initialization); k > 1 runs Lloyd iterations in DTW space with
/// k distinct seeded-random members as initial centroids, nearest-centroid
/// assignment (ties toward the lowest centroid index), empty clusters
/// reseeded to the member farthest from its current centroid, and centroid
/// updates via dba_mean. Stops when the assignment is stable or after
/// max_iter rounds. Prototypes are ordered by (class, centroid index).
/// Throws input_error when a class has fewer than k members.
Codebook kmeans_per_class(const LabeledDataset& D, std::size_t k,
                          std::size_t max_iter = 50, std::uint64_t seed = 0,
                          std::size_t dba_max_iter = 50);

KmeansResult kmeans_per_class_detailed(const LabeledDataset& D, std::size_t k,
                                       std::size_t max_iter = 50, std::uint64_t seed = 0,
                                       std::size_t dba_max_iter = 50);

} // namespace dtwlvq
