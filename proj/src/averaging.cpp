#include "dtwlvq/averaging.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "dtwlvq/errors.hpp"

namespace dtwlvq {

namespace {

void check_average_args(const TimeSeries& p, const TimeSeries& x, double alpha,
                        const WarpingPath& w) {
  if (p.dim() != x.dim()) throw input_error("series have different feature dimensions");
  if (!std::isfinite(alpha)) throw input_error("alpha must be finite");
  if (w.rows() != p.length() || w.cols() != x.length())
    throw input_error("warping path order does not match the series lengths");
}

} // namespace

TimeSeries asymmetric_weighted_average(const TimeSeries& p, const TimeSeries& x,
                                       double alpha, const WarpingPath& w) {
  check_average_args(p, x, alpha, w);
  const std::size_t d = p.dim();
  std::vector<double> sums(p.values().size(), 0.0);
  std::vector<std::uint32_t> valence(p.length(), 0);
  for (const auto& pt : w.points()) {
    ++valence[pt.i - 1];
    const auto xj = x.point(pt.j - 1);
    for (std::size_t c = 0; c < d; ++c) sums[(pt.i - 1) * d + c] += xj[c];
  }
  std::vector<double> out(p.values().size());
  for (std::size_t i = 0; i < p.length(); ++i) {
    const auto pi = p.point(i);
    for (std::size_t c = 0; c < d; ++c)
      out[i * d + c] =
          (1.0 - alpha) * static_cast<double>(valence[i]) * pi[c] + alpha * sums[i * d + c];
  }
  return TimeSeries(std::move(out), d);
}

TimeSeries symmetric_weighted_average(const TimeSeries& p, const TimeSeries& x,
                                      double alpha, const WarpingPath& w) {
  check_average_args(p, x, alpha, w);
  const std::size_t d = p.dim();
  std::vector<double> out;
  out.reserve(w.length() * d);
  for (const auto& pt : w.points()) {
    const auto pi = p.point(pt.i - 1);
    const auto xj = x.point(pt.j - 1);
    for (std::size_t c = 0; c < d; ++c) out.push_back((1.0 - alpha) * pi[c] + alpha * xj[c]);
  }
  return TimeSeries(std::move(out), d);
}

TimeSeries resample(const TimeSeries& z, std::size_t m) {
  if (m == 0) throw input_error("resample length must be positive");
  const std::size_t len = z.length();
  if (m == len) return z;
  const std::size_t d = z.dim();
  std::vector<double> out;
  out.reserve(m * d);
  for (std::size_t k = 0; k < m; ++k) {
    // 1-based position over [1, len]; endpoints land exactly on 1 and len
    const double pos =
        (m == 1 || len == 1)
            ? 1.0
            : 1.0 + static_cast<double>(k) * static_cast<double>(len - 1) /
                        static_cast<double>(m - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo >= len) lo = len - 1;
    const double frac = pos - static_cast<double>(lo);
    const auto a = z.point(lo - 1);
    const auto b = z.point(lo < len ? lo : len - 1);
    for (std::size_t c = 0; c < d; ++c) out.push_back((1.0 - frac) * a[c] + frac * b[c]);
  }
  return TimeSeries(std::move(out), d);
}

double frechet_variation(const TimeSeries& z, const std::vector<TimeSeries>& S) {
  if (S.empty()) throw input_error("sample set must not be empty");
  double sum = 0.0;
  for (const auto& x : S) sum += dtw_squared(z, x);
  return sum;
}

std::size_t medoid_index(const std::vector<TimeSeries>& S) {
  if (S.empty()) throw input_error("sample set must not be empty");
  std::size_t best = 0;
  double best_var = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < S.size(); ++i) {
    const double var = frechet_variation(S[i], S);
    if (var < best_var) {
      best_var = var;
      best = i;
    }
  }
  return best;
}

namespace {

DbaResult dba_run(const std::vector<TimeSeries>& S, const TimeSeries& init,
                  std::size_t max_iter, bool trace) {
  if (S.empty()) throw input_error("sample set must not be empty");
  if (max_iter == 0) throw input_error("max_iter must be positive");
  for (const auto& x : S)
    if (x.dim() != init.dim()) throw input_error("series have different feature dimensions");

  const std::size_t m = init.length(), d = init.dim();
  TimeSeries z = init;
  DbaResult result{z, {}, 0};

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    std::vector<double> sums(m * d, 0.0);
    std::vector<std::uint64_t> counts(m, 0);
    double variation = 0.0;
    for (const auto& x : S) {
      const auto r = dtw(z, x);
      variation += alignment_cost(z, x, r.path);
      for (const auto& pt : r.path.points()) {
        ++counts[pt.i - 1];
        const auto xj = x.point(pt.j - 1);
        for (std::size_t c = 0; c < d; ++c) sums[(pt.i - 1) * d + c] += xj[c];
      }
    }
    if (trace) result.variation.push_back(variation);

    std::vector<double> next(m * d);
    double max_change = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < d; ++c) {
        next[i * d + c] = sums[i * d + c] / static_cast<double>(counts[i]);
        max_change = std::max(max_change, std::abs(next[i * d + c] - z.values()[i * d + c]));
      }
    z = TimeSeries(std::move(next), d);
    result.iterations = iter + 1;
    if (max_change < 1e-8) break;
  }

  // the loop records the variation of each iterate it updated from; close
  // the trace with the variation of the returned mean
  if (trace) result.variation.push_back(frechet_variation(z, S));
  result.mean = std::move(z);
  return result;
}

} // namespace

TimeSeries dba_mean(const std::vector<TimeSeries>& S, const TimeSeries& init,
                    std::size_t max_iter) {
  return dba_run(S, init, max_iter, false).mean;
}

DbaResult dba_mean_detailed(const std::vector<TimeSeries>& S, const TimeSeries& init,
                            std::size_t max_iter) {
  return dba_run(S, init, max_iter, true);
}

} // namespace dtwlvq
