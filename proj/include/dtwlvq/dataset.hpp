#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dtwlvq/timeseries.hpp"

namespace dtwlvq {

struct LabeledExample {
  TimeSeries series;
  int label;
};

/// A non-empty collection of labeled series with contiguous class labels
/// 1..C (every class present) and a common feature dimension. Series
/// lengths may differ. raw_labels, when present, records the original
/// label text per contiguous id (index 0 holds class 1).
class LabeledDataset {
public:
  explicit LabeledDataset(std::vector<LabeledExample> examples,
                          std::vector<std::string> raw_labels = {});

  std::size_t size() const { return examples_.size(); }
  int num_classes() const { return num_classes_; }
  std::size_t dim() const { return examples_.front().series.dim(); }

  const LabeledExample& operator[](std::size_t i) const { return examples_[i]; }
  const std::vector<LabeledExample>& examples() const { return examples_; }
  const std::vector<std::string>& raw_labels() const { return raw_labels_; }

  /// Sub-dataset of the given example indices, order preserved.
  /// Requires every class to stay represented.
  LabeledDataset subset(const std::vector<std::size_t>& indices) const;

private:
  std::vector<LabeledExample> examples_;
  std::vector<std::string> raw_labels_;
  int num_classes_;
};

} // namespace dtwlvq
