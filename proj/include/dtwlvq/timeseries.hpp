#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dtwlvq {

/// A time series of d-dimensional feature vectors, stored row-major.
/// Construction validates: length >= 1, dim >= 1, all values finite.
class TimeSeries {
public:
  /// Univariate series.
  explicit TimeSeries(std::vector<double> values);
  TimeSeries(std::initializer_list<double> values);

  /// Multivariate series from a row-major buffer of length*dim values.
  TimeSeries(std::vector<double> values, std::size_t dim);

  /// Multivariate series from one feature vector per time point.
  static TimeSeries from_points(const std::vector<std::vector<double>>& points);

  std::size_t length() const { return values_.size() / dim_; }
  std::size_t dim() const { return dim_; }

  /// Feature vector at 0-based time point i.
  std::span<const double> point(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }

  /// Scalar value at 0-based time point i; requires dim() == 1.
  double value(std::size_t i) const { return values_[i * dim_]; }

  const std::vector<double>& values() const { return values_; }

  bool operator==(const TimeSeries&) const = default;

private:
  std::vector<double> values_;
  std::size_t dim_;
};

/// Squared Euclidean distance between two feature vectors of equal size.
double squared_euclidean(std::span<const double> a, std::span<const double> b);

} // namespace dtwlvq
