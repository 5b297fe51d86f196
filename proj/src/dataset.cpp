#include "dtwlvq/dataset.hpp"

#include <set>

#include "dtwlvq/errors.hpp"

namespace dtwlvq {

LabeledDataset::LabeledDataset(std::vector<LabeledExample> examples,
                               std::vector<std::string> raw_labels)
    : examples_(std::move(examples)), raw_labels_(std::move(raw_labels)) {
  if (examples_.empty()) throw input_error("dataset must contain at least one example");
  const std::size_t dim = examples_.front().series.dim();
  std::set<int> labels;
  for (const auto& ex : examples_) {
    if (ex.series.dim() != dim)
      throw input_error("all examples must share one feature dimension");
    if (ex.label < 1) throw input_error("labels must be positive");
    labels.insert(ex.label);
  }
  num_classes_ = *labels.rbegin();
  if (static_cast<int>(labels.size()) != num_classes_)
    throw input_error("labels must be contiguous 1..C with every class present");
  if (!raw_labels_.empty() && raw_labels_.size() != static_cast<std::size_t>(num_classes_))
    throw input_error("raw label mapping must list one entry per class");
}

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& indices) const {
  std::vector<LabeledExample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(examples_[i]);
  return LabeledDataset(std::move(out), raw_labels_);
}

} // namespace dtwlvq
