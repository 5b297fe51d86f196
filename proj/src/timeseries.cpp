#include "dtwlvq/timeseries.hpp"

#include <cmath>

#include "dtwlvq/errors.hpp"

namespace dtwlvq {

namespace {

void check(const std::vector<double>& values, std::size_t dim) {
  if (dim == 0) throw input_error("time series dimension must be positive");
  if (values.empty()) throw input_error("time series must contain at least one element");
  if (values.size() % dim != 0)
    throw input_error("value count is not a multiple of the feature dimension");
  for (double v : values)
    if (!std::isfinite(v)) throw input_error("time series values must be finite");
}

} // namespace

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)), dim_(1) {
  check(values_, dim_);
}

TimeSeries::TimeSeries(std::initializer_list<double> values)
    : TimeSeries(std::vector<double>(values)) {}

TimeSeries::TimeSeries(std::vector<double> values, std::size_t dim)
    : values_(std::move(values)), dim_(dim) {
  check(values_, dim_);
}

TimeSeries TimeSeries::from_points(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw input_error("time series must contain at least one element");
  const std::size_t dim = points.front().size();
  std::vector<double> flat;
  flat.reserve(points.size() * dim);
  for (const auto& pt : points) {
    if (pt.size() != dim) throw input_error("all feature vectors must share one dimension");
    flat.insert(flat.end(), pt.begin(), pt.end());
  }
  return TimeSeries(std::move(flat), dim);
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return sum;
}

} // namespace dtwlvq
