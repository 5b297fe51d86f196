#include "dtwlvq/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dtwlvq/errors.hpp"

namespace dtwlvq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kEnumerationLimit = 14;

void check_pair(const TimeSeries& x, const TimeSeries& y) {
  if (x.dim() != y.dim())
    throw input_error("series have different feature dimensions");
}

// Full accumulated-cost matrix, (m+1) x (n+1) with an infinite border.
std::vector<double> cost_matrix(const TimeSeries& x, const TimeSeries& y) {
  const std::size_t m = x.length(), n = y.length();
  std::vector<double> D((m + 1) * (n + 1), kInf);
  const auto at = [n](std::size_t i, std::size_t j) -> std::size_t {
    return i * (n + 1) + j;
  };
  D[at(0, 0)] = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const auto xi = x.point(i - 1);
    for (std::size_t j = 1; j <= n; ++j) {
      const double best = std::min({D[at(i - 1, j - 1)], D[at(i - 1, j)], D[at(i, j - 1)]});
      D[at(i, j)] = best + squared_euclidean(xi, y.point(j - 1));
    }
  }
  return D;
}

// Backtrace with the fixed tie order: diagonal, then vertical (i-1, j),
// then horizontal (i, j-1).
std::vector<PathPoint> backtrace(const std::vector<double>& D, std::size_t m, std::size_t n) {
  const auto at = [n](std::size_t i, std::size_t j) -> std::size_t {
    return i * (n + 1) + j;
  };
  std::vector<PathPoint> pts;
  std::size_t i = m, j = n;
  pts.push_back({i, j});
  while (i > 1 || j > 1) {
    const double diag = D[at(i - 1, j - 1)];
    const double vert = D[at(i - 1, j)];
    const double horiz = D[at(i, j - 1)];
    const double best = std::min({diag, vert, horiz});
    if (diag == best) {
      --i;
      --j;
    } else if (vert == best) {
      --i;
    } else {
      --j;
    }
    pts.push_back({i, j});
  }
  std::reverse(pts.begin(), pts.end());
  return pts;
}

void extend_paths(std::vector<PathPoint>& current, std::size_t m, std::size_t n,
                  std::vector<WarpingPath>& out) {
  const auto [i, j] = current.back();
  if (i == m && j == n) {
    out.emplace_back(current, m, n);
    return;
  }
  // step order fixes the enumeration order: down, right, diagonal
  if (i < m) {
    current.push_back({i + 1, j});
    extend_paths(current, m, n, out);
    current.pop_back();
  }
  if (j < n) {
    current.push_back({i, j + 1});
    extend_paths(current, m, n, out);
    current.pop_back();
  }
  if (i < m && j < n) {
    current.push_back({i + 1, j + 1});
    extend_paths(current, m, n, out);
    current.pop_back();
  }
}

} // namespace

WarpingPath::WarpingPath(std::vector<PathPoint> points, std::size_t rows, std::size_t cols)
    : points_(std::move(points)), rows_(rows), cols_(cols) {
  if (rows_ == 0 || cols_ == 0) throw path_error("path order must be positive");
  if (points_.empty()) throw path_error("warping path must not be empty");
  if (points_.front() != PathPoint{1, 1})
    throw path_error("warping path must start at (1,1)");
  if (points_.back() != PathPoint{rows_, cols_})
    throw path_error("warping path must end at (rows, cols)");
  for (std::size_t l = 1; l < points_.size(); ++l) {
    const std::size_t di = points_[l].i - points_[l - 1].i;
    const std::size_t dj = points_[l].j - points_[l - 1].j;
    if (points_[l].i < points_[l - 1].i || points_[l].j < points_[l - 1].j ||
        di > 1 || dj > 1 || (di == 0 && dj == 0))
      throw path_error("warping path steps must be (1,0), (0,1) or (1,1)");
  }
}

std::vector<std::uint8_t> Alignment::dense_warping_matrix() const {
  std::vector<std::uint8_t> w(path.rows() * path.cols(), 0);
  for (const auto& pt : path.points()) w[(pt.i - 1) * path.cols() + (pt.j - 1)] = 1;
  return w;
}

double alignment_cost(const TimeSeries& x, const TimeSeries& y, const WarpingPath& w) {
  check_pair(x, y);
  if (w.rows() != x.length() || w.cols() != y.length())
    throw input_error("warping path order does not match the series lengths");
  double cost = 0.0;
  for (const auto& pt : w.points())
    cost += squared_euclidean(x.point(pt.i - 1), y.point(pt.j - 1));
  return cost;
}

DtwResult dtw(const TimeSeries& x, const TimeSeries& y) {
  check_pair(x, y);
  const auto D = cost_matrix(x, y);
  WarpingPath path(backtrace(D, x.length(), y.length()), x.length(), y.length());
  const double cost = alignment_cost(x, y, path);
  return {std::sqrt(cost), std::move(path)};
}

double dtw_squared(const TimeSeries& x, const TimeSeries& y) {
  check_pair(x, y);
  const std::size_t m = x.length(), n = y.length();
  // two-row rolling variant of the full matrix
  std::vector<double> prev(n + 1, kInf), cur(n + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const auto xi = x.point(i - 1);
    cur[0] = kInf;
    for (std::size_t j = 1; j <= n; ++j) {
      const double best = std::min({prev[j - 1], prev[j], cur[j - 1]});
      cur[j] = best + squared_euclidean(xi, y.point(j - 1));
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double dtw_distance(const TimeSeries& x, const TimeSeries& y) {
  return std::sqrt(dtw_squared(x, y));
}

std::vector<WarpingPath> enumerate_warping_paths(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw input_error("path order must be positive");
  if (rows + cols > kEnumerationLimit)
    throw size_error("refusing to enumerate warping paths for rows + cols > 14");
  std::vector<WarpingPath> out;
  std::vector<PathPoint> current{{1, 1}};
  extend_paths(current, rows, cols, out);
  return out;
}

Alignment alignment_of(WarpingPath w) {
  std::vector<std::uint32_t> valence(w.rows(), 0);
  for (const auto& pt : w.points()) ++valence[pt.i - 1];
  return {std::move(w), std::move(valence)};
}

TimeSeries subgradient(const TimeSeries& p, const TimeSeries& x) {
  const auto r = dtw(p, x);
  const std::size_t d = p.dim();
  // g_i = 2 (v_i p_i - sum of x elements aligned with p_i)
  std::vector<double> g(p.values().size(), 0.0);
  std::vector<std::uint32_t> valence(p.length(), 0);
  for (const auto& pt : r.path.points()) {
    ++valence[pt.i - 1];
    const auto xj = x.point(pt.j - 1);
    for (std::size_t c = 0; c < d; ++c) g[(pt.i - 1) * d + c] -= xj[c];
  }
  for (std::size_t i = 0; i < p.length(); ++i) {
    const auto pi = p.point(i);
    for (std::size_t c = 0; c < d; ++c) {
      g[i * d + c] += static_cast<double>(valence[i]) * pi[c];
      g[i * d + c] *= 2.0;
    }
  }
  return TimeSeries(std::move(g), d);
}

} // namespace dtwlvq
