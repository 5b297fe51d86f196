#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dtwlvq/timeseries.hpp"

namespace dtwlvq {

/// One alignment pair (i, j), 1-based in both axes.
struct PathPoint {
  std::size_t i;
  std::size_t j;
  auto operator<=>(const PathPoint&) const = default;
};

/// A warping path of order (rows, cols): starts at (1,1), ends at
/// (rows, cols), each step in {(1,0), (0,1), (1,1)}. Construction
/// validates these constraints and throws path_error on violation.
class WarpingPath {
public:
  WarpingPath(std::vector<PathPoint> points, std::size_t rows, std::size_t cols);

  const std::vector<PathPoint>& points() const { return points_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t length() const { return points_.size(); }

  bool operator==(const WarpingPath&) const = default;

private:
  std::vector<PathPoint> points_;
  std::size_t rows_;
  std::size_t cols_;
};

/// A path together with the valence of each row index (how many column
/// elements the row is aligned with). The dense warping matrix is never
/// kept; it can be materialized on demand for inspection.
struct Alignment {
  WarpingPath path;
  std::vector<std::uint32_t> valence;

  /// Row-major rows x cols 0/1 matrix with a 1 at every path point.
  std::vector<std::uint8_t> dense_warping_matrix() const;
};

struct DtwResult {
  double distance;
  WarpingPath path;
};

/// Sum of squared Euclidean distances over the aligned pairs of w.
/// Throws input_error when the path order does not match the series.
double alignment_cost(const TimeSeries& x, const TimeSeries& y, const WarpingPath& w);

/// DTW distance with an optimal path. The path comes from a full
/// dynamic program with deterministic backtrace: on cost ties the
/// predecessor preference is diagonal, then vertical (i-1, j), then
/// horizontal (i, j-1). distance equals sqrt(alignment_cost(x, y, path)).
DtwResult dtw(const TimeSeries& x, const TimeSeries& y);

/// Minimal alignment cost only; no path is materialized.
double dtw_squared(const TimeSeries& x, const TimeSeries& y);

/// sqrt(dtw_squared(x, y)).
double dtw_distance(const TimeSeries& x, const TimeSeries& y);

/// All warping paths of order (rows, cols) in a deterministic order.
/// Guarded: throws size_error when rows + cols > 14.
std::vector<WarpingPath> enumerate_warping_paths(std::size_t rows, std::size_t cols);

/// Valence vector of a path (dense matrix semantics, streamed).
Alignment alignment_of(WarpingPath w);

/// Subgradient 2(Vp - Wx) of the squared DTW distortion at p, taken
/// along the deterministic optimal path of dtw(p, x).
TimeSeries subgradient(const TimeSeries& p, const TimeSeries& x);

} // namespace dtwlvq
