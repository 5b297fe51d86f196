#pragma once

#include <string>

#include "dtwlvq/dataset.hpp"
#include "dtwlvq/format.hpp"

namespace dtwlvq {

struct LoadOptions {
  /// Reject rows whose series length differs from the first row.
  bool strict_lengths = true;
  /// Per-series z-normalization (zero mean, unit variance per feature).
  bool znormalize = false;
};

/// Loads a labeled dataset. Files ending in .json use the multivariate
/// JSON container; anything else is read as delimited text with one
/// series per row, the first field being the label and the delimiter
/// (comma or tab) auto-detected from the first row. Labels are remapped
/// to contiguous ids 1..C with the original text recorded.
LabeledDataset load_dataset(const std::string& path, const LoadOptions& options = {});

/// Writes a dataset so that load_dataset reads it back identically:
/// .json paths get the JSON container, others comma-delimited rows.
/// Multivariate data requires the JSON container.
void save_dataset(const LabeledDataset& D, const std::string& path);

} // namespace dtwlvq
