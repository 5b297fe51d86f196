#pragma once

#include <cstddef>
#include <vector>

#include "dtwlvq/dtw.hpp"
#include "dtwlvq/timeseries.hpp"

namespace dtwlvq {

/// Weighted average pulled onto the time axis of p: for each time point i
/// of p with valence v and aligned elements x_{j_1..j_v},
///   p'_i = (1 - alpha) * v * p_i + alpha * (x_{j_1} + ... + x_{j_v}).
/// Output length equals len(p).
TimeSeries asymmetric_weighted_average(const TimeSeries& p, const TimeSeries& x,
                                       double alpha, const WarpingPath& w);

/// Element-wise average along the path: p'_l = (1 - alpha) * p_{i_l} + alpha * x_{j_l}.
/// Output length equals the path length.
TimeSeries symmetric_weighted_average(const TimeSeries& p, const TimeSeries& x,
                                      double alpha, const WarpingPath& w);

/// Piecewise-linear resampling of z at m uniformly spaced positions over
/// [1, len(z)]. Identity when m == len(z); first and last elements are
/// preserved exactly for m >= 2.
TimeSeries resample(const TimeSeries& z, std::size_t m);

/// Sum of squared DTW distances from z to every member of S.
double frechet_variation(const TimeSeries& z, const std::vector<TimeSeries>& S);

/// Index of the member of S minimizing frechet_variation (ties: lowest index).
std::size_t medoid_index(const std::vector<TimeSeries>& S);

struct DbaResult {
  TimeSeries mean;
  /// frechet_variation of each iterate, including the returned mean.
  std::vector<double> variation;
  std::size_t iterations;
};

/// DTW barycenter averaging: starting from init, repeatedly set every
/// element of the estimate to the arithmetic mean of all member elements
/// aligned with it, until the largest absolute element change drops below
/// 1e-8 or max_iter iterations have run. Output length equals len(init).
TimeSeries dba_mean(const std::vector<TimeSeries>& S, const TimeSeries& init,
                    std::size_t max_iter = 50);

/// dba_mean with the per-iterate variation trace.
DbaResult dba_mean_detailed(const std::vector<TimeSeries>& S, const TimeSeries& init,
                            std::size_t max_iter = 50);

} // namespace dtwlvq
