#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dtwlvq/dtw.hpp"
#include "dtwlvq/errors.hpp"
#include "dtwlvq/rng.hpp"
#include "dtwlvq/timeseries.hpp"
#include "oracles.hpp"

using namespace dtwlvq;

TEST_CASE("TimeSeries construction validates its invariants") {
  CHECK_THROWS_AS(TimeSeries(std::vector<double>{}), input_error);
  CHECK_THROWS_AS(TimeSeries(std::vector<double>{1.0, 2.0}, 0), input_error);
  CHECK_THROWS_AS(TimeSeries(std::vector<double>{1.0, 2.0, 3.0}, 2), input_error);
  CHECK_THROWS_AS(TimeSeries({1.0, std::nan("")}), input_error);
  CHECK_THROWS_AS(TimeSeries({1.0, std::numeric_limits<double>::infinity()}), input_error);

  const TimeSeries uni{1.0, 2.0, 3.0};
  CHECK(uni.length() == 3);
  CHECK(uni.dim() == 1);
  CHECK(uni.value(1) == 2.0);

  const TimeSeries multi({1.0, 2.0, 3.0, 4.0}, 2);
  CHECK(multi.length() == 2);
  CHECK(multi.dim() == 2);
  CHECK(multi.point(1)[0] == 3.0);

  const auto from_pts = TimeSeries::from_points({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(from_pts == multi);
  CHECK_THROWS_AS(TimeSeries::from_points({{1.0}, {2.0, 3.0}}), input_error);
}

TEST_CASE("WarpingPath validates boundary, steps and range") {
  CHECK_NOTHROW(WarpingPath({{1, 1}, {1, 2}, {2, 3}}, 2, 3));
  CHECK_NOTHROW(WarpingPath({{1, 1}}, 1, 1));
  // wrong start
  CHECK_THROWS_AS(WarpingPath({{1, 2}, {2, 3}}, 2, 3), path_error);
  // wrong end
  CHECK_THROWS_AS(WarpingPath({{1, 1}, {2, 2}}, 2, 3), path_error);
  // illegal step (2,1)
  CHECK_THROWS_AS(WarpingPath({{1, 1}, {3, 2}, {3, 3}}, 3, 3), path_error);
  // stationary step
  CHECK_THROWS_AS(WarpingPath({{1, 1}, {1, 1}, {2, 3}}, 2, 3), path_error);
  // backwards step
  CHECK_THROWS_AS(WarpingPath({{1, 1}, {2, 2}, {1, 3}, {2, 3}}, 2, 3), path_error);
  // empty
  CHECK_THROWS_AS(WarpingPath({}, 1, 1), path_error);

  const WarpingPath w({{1, 1}, {1, 2}, {2, 3}}, 2, 3);
  CHECK(w.length() == 3);
  CHECK(w.rows() == 2);
  CHECK(w.cols() == 3);
}

TEST_CASE("warping path length bounds hold for every enumerated order") {
  for (std::size_t m = 1; m <= 5; ++m) {
    for (std::size_t n = 1; n <= 5; ++n) {
      for (const auto& w : enumerate_warping_paths(m, n)) {
        CHECK(w.length() >= std::max(m, n));
        CHECK(w.length() <= m + n - 1);
      }
    }
  }
}

TEST_CASE("alignment_cost matches the hand example and rejects bad input") {
  const TimeSeries x{1.0, 2.0};
  const TimeSeries y{2.0, 2.0, 2.0};
  const WarpingPath w({{1, 1}, {1, 2}, {2, 3}}, 2, 3);
  CHECK(alignment_cost(x, y, w) == 2.0);

  // order mismatch
  CHECK_THROWS_AS(alignment_cost(y, x, w), input_error);
  // feature dimension mismatch
  const TimeSeries x2({1.0, 1.0, 2.0, 2.0}, 2);
  CHECK_THROWS_AS(alignment_cost(x2, y, WarpingPath({{1, 1}, {2, 2}, {2, 3}}, 2, 3)),
                  input_error);
}

TEST_CASE("dtw matches the hand examples") {
  const TimeSeries x{1.0, 2.0};
  const TimeSeries y{2.0, 2.0, 2.0};
  const auto r = dtw(x, y);
  CHECK(r.distance == doctest::Approx(1.0).epsilon(1e-12));
  // deterministic backtrace: diagonal preferred, so (1,1),(2,2),(2,3)
  CHECK(r.path == WarpingPath({{1, 1}, {2, 2}, {2, 3}}, 2, 3));

  const TimeSeries a{0.0, 0.0, 0.0};
  const TimeSeries b{1.0, 1.0};
  CHECK(dtw_squared(a, b) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(oracle::dtw_squared(a, b) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("dtw of a series with itself is exactly zero along the diagonal") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto x = oracle::random_series(rng, 1 + t % 6);
    const auto r = dtw(x, x);
    CHECK(r.distance == 0.0);
    CHECK(r.path.length() == x.length());
    CHECK(dtw_squared(x, x) == 0.0);
  }
}

TEST_CASE("dtw is symmetric and nonnegative") {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const auto x = oracle::random_series(rng, 1 + rng.below(6));
    const auto y = oracle::random_series(rng, 1 + rng.below(6));
    const double dxy = dtw_distance(x, y);
    const double dyx = dtw_distance(y, x);
    CHECK(dxy >= 0.0);
    CHECK(dxy == doctest::Approx(dyx).epsilon(1e-12));
  }
}

TEST_CASE("the dynamic program equals exhaustive enumeration for all small orders") {
  Rng rng(13);
  for (std::size_t m = 1; m <= 6; ++m) {
    for (std::size_t n = 1; n <= 6; ++n) {
      for (int rep = 0; rep < 4; ++rep) {
        const auto x = oracle::random_series(rng, m);
        const auto y = oracle::random_series(rng, n);
        const double brute = oracle::dtw_squared(x, y);
        CHECK(dtw_squared(x, y) == doctest::Approx(brute).epsilon(1e-12));
        const auto r = dtw(x, y);
        CHECK(r.distance * r.distance == doctest::Approx(brute).epsilon(1e-9));
        // the returned path certifies its own cost
        CHECK(alignment_cost(x, y, r.path) == doctest::Approx(r.distance * r.distance));
      }
    }
  }
}

TEST_CASE("multivariate dtw agrees with enumeration") {
  Rng rng(14);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 1 + rng.below(4), n = 1 + rng.below(4), d = 2 + rng.below(2);
    std::vector<double> xv(m * d), yv(n * d);
    for (auto& e : xv) e = rng.uniform();
    for (auto& e : yv) e = rng.uniform();
    const TimeSeries x(xv, d), y(yv, d);
    CHECK(dtw_squared(x, y) == doctest::Approx(oracle::dtw_squared(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("dtw rejects feature dimension mismatches") {
  const TimeSeries x({0.0, 0.0}, 2);
  const TimeSeries y{1.0, 2.0};
  CHECK_THROWS_AS(dtw(x, y), input_error);
  CHECK_THROWS_AS(dtw_squared(x, y), input_error);
}

TEST_CASE("triangle inequality violation witness (frozen from random search)") {
  const TimeSeries x{0.0};
  const TimeSeries z{1.0};
  const TimeSeries y{1.0, 2.0};
  const double dxy = dtw_distance(x, y);
  const double dxz = dtw_distance(x, z);
  const double dzy = dtw_distance(z, y);
  CHECK(dxy == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(dxy > dxz + dzy + 0.2);
  // the oracle agrees the witness is real
  CHECK(std::sqrt(oracle::dtw_squared(x, y)) > std::sqrt(oracle::dtw_squared(x, z)) +
                                                   std::sqrt(oracle::dtw_squared(z, y)) + 0.2);
}

TEST_CASE("enumerate_warping_paths matches the independent strategy and Delannoy counts") {
  for (std::size_t m = 1; m <= 5; ++m) {
    for (std::size_t n = 1; n <= 5; ++n) {
      const auto lib = enumerate_warping_paths(m, n);
      const auto ref = oracle::all_paths(m, n);
      CHECK(lib.size() == ref.size());
      CHECK(lib.size() == oracle::path_count(m, n));
      std::set<std::vector<PathPoint>> lib_set, ref_set;
      for (const auto& w : lib) lib_set.insert(w.points());
      for (const auto& pts : ref) ref_set.insert(pts);
      CHECK(lib_set.size() == lib.size()); // no duplicates
      CHECK(lib_set == ref_set);
    }
  }
  CHECK(enumerate_warping_paths(2, 2).size() == 3);
  CHECK(enumerate_warping_paths(3, 3).size() == 13);
  CHECK(enumerate_warping_paths(1, 1).size() == 1);
  CHECK(enumerate_warping_paths(7, 7).size() == 8989);
}

TEST_CASE("enumerate_warping_paths guards the combinatorial limit") {
  CHECK_THROWS_AS(enumerate_warping_paths(8, 7), size_error);
  CHECK_THROWS_AS(enumerate_warping_paths(1, 14), size_error);
  CHECK_THROWS_AS(enumerate_warping_paths(0, 3), input_error);
}

TEST_CASE("alignment_of computes valences consistent with the dense matrix") {
  const WarpingPath w({{1, 1}, {1, 2}, {2, 3}}, 2, 3);
  const auto a = alignment_of(w);
  CHECK(a.valence == std::vector<std::uint32_t>{2, 1});

  const auto dense = a.dense_warping_matrix();
  REQUIRE(dense.size() == 6);
  CHECK(dense == std::vector<std::uint8_t>{1, 1, 0, 0, 0, 1});

  Rng rng(15);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + rng.below(5), n = 1 + rng.below(5);
    const auto paths = enumerate_warping_paths(m, n);
    const auto& w2 = paths[rng.below(paths.size())];
    const auto al = alignment_of(w2);
    REQUIRE(al.valence.size() == m);
    std::size_t total = 0;
    for (auto v : al.valence) {
      CHECK(v >= 1);
      total += v;
    }
    CHECK(total == w2.length());
    const auto d = al.dense_warping_matrix();
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t row = 0;
      for (std::size_t j = 0; j < n; ++j) row += d[i * n + j];
      CHECK(row == al.valence[i]);
    }
  }
}

TEST_CASE("subgradient reduces to the Euclidean gradient on aligned pairs") {
  const TimeSeries p{0.0, 1.0, 4.0};
  const TimeSeries x{0.5, 1.5, 4.5};
  // the diagonal is uniquely optimal here, so the subgradient is 2(p - x)
  const auto g = subgradient(p, x);
  REQUIRE(g.length() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(g.value(i) == doctest::Approx(2.0 * (p.value(i) - x.value(i))).epsilon(1e-12));

  // at p == x the subgradient vanishes exactly
  const auto zero = subgradient(p, p);
  for (std::size_t i = 0; i < 3; ++i) CHECK(zero.value(i) == 0.0);
}

TEST_CASE("subgradient matches central finite differences when the path is unique") {
  Rng rng(16);
  int tested = 0;
  while (tested < 40) {
    const auto p = oracle::random_series(rng, 1 + rng.below(5));
    const auto x = oracle::random_series(rng, 1 + rng.below(7));
    const auto info = oracle::dtw_min_info(p, x);
    if (info.best_count != 1 || info.second_best - info.best < 1e-3) continue;
    ++tested;
    const auto g = subgradient(p, x);
    const auto fd = oracle::fd_gradient(p, x);
    REQUIRE(g.values().size() == fd.size());
    for (std::size_t k = 0; k < fd.size(); ++k) {
      const double err = std::abs(g.values()[k] - fd[k]) / std::max(1.0, std::abs(fd[k]));
      CHECK(err <= 1e-5);
    }
  }
}
