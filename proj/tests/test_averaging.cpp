#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dtwlvq/averaging.hpp"
#include "dtwlvq/dtw.hpp"
#include "dtwlvq/errors.hpp"
#include "dtwlvq/rng.hpp"
#include "oracles.hpp"

using namespace dtwlvq;

TEST_CASE("asymmetric weighted average follows the element-wise formula") {
  const TimeSeries p{1.0, 2.0};
  const TimeSeries x{2.0, 2.0, 2.0};
  const WarpingPath w({{1, 1}, {1, 2}, {2, 3}}, 2, 3);

  const auto half = asymmetric_weighted_average(p, x, 0.5, w);
  REQUIRE(half.length() == 2);
  CHECK(half.value(0) == 3.0);
  CHECK(half.value(1) == 2.0);

  // alpha = 1 keeps only the aligned sums
  const auto ones = asymmetric_weighted_average(p, x, 1.0, w);
  CHECK(ones.value(0) == 4.0);
  CHECK(ones.value(1) == 2.0);
}

TEST_CASE("asymmetric average with alpha 0 and unit valences is the identity") {
  const TimeSeries p{3.0, -1.0, 2.0};
  const TimeSeries x{0.0, 5.0, 1.0};
  const WarpingPath diag({{1, 1}, {2, 2}, {3, 3}}, 3, 3);
  CHECK(asymmetric_weighted_average(p, x, 0.0, diag) == p);
}

TEST_CASE("symmetric weighted average walks the path") {
  const TimeSeries p{1.0, 2.0};
  const TimeSeries x{2.0, 2.0, 2.0};
  const WarpingPath w({{1, 1}, {1, 2}, {2, 3}}, 2, 3);

  const auto half = symmetric_weighted_average(p, x, 0.5, w);
  REQUIRE(half.length() == 3);
  CHECK(half.value(0) == 1.5);
  CHECK(half.value(1) == 1.5);
  CHECK(half.value(2) == 2.0);

  const auto zero = symmetric_weighted_average(p, x, 0.0, w);
  CHECK(zero == TimeSeries{1.0, 1.0, 2.0});
  const auto one = symmetric_weighted_average(p, x, 1.0, w);
  CHECK(one == TimeSeries{2.0, 2.0, 2.0});
}

TEST_CASE("both averages coincide on equal-length diagonal paths") {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + rng.below(6);
    const auto p = oracle::random_series(rng, m);
    const auto x = oracle::random_series(rng, m);
    std::vector<PathPoint> pts;
    for (std::size_t i = 1; i <= m; ++i) pts.push_back({i, i});
    const WarpingPath diag(pts, m, m);
    const double alpha = rng.uniform() * 2.0 - 0.5; // also outside [0,1]
    const auto a = asymmetric_weighted_average(p, x, alpha, diag);
    const auto s = symmetric_weighted_average(p, x, alpha, diag);
    CHECK(a == s);
    for (std::size_t i = 0; i < m; ++i)
      CHECK(a.value(i) == (1.0 - alpha) * p.value(i) + alpha * x.value(i));
  }
}

TEST_CASE("averages validate their inputs") {
  const TimeSeries p{1.0, 2.0};
  const TimeSeries x{2.0, 2.0, 2.0};
  const WarpingPath w({{1, 1}, {1, 2}, {2, 3}}, 2, 3);
  const WarpingPath wrong({{1, 1}, {2, 2}, {3, 3}}, 3, 3);
  CHECK_THROWS_AS(asymmetric_weighted_average(p, x, 0.5, wrong), input_error);
  CHECK_THROWS_AS(symmetric_weighted_average(p, x, 0.5, wrong), input_error);
  CHECK_THROWS_AS(asymmetric_weighted_average(p, x, std::nan(""), w), input_error);
  CHECK_THROWS_AS(symmetric_weighted_average(p, x, std::nan(""), w), input_error);
  const TimeSeries p2({1.0, 1.0, 2.0, 2.0}, 2);
  CHECK_THROWS_AS(asymmetric_weighted_average(p2, x, 0.5, w), input_error);
}

TEST_CASE("resample interpolates linearly at uniform positions") {
  CHECK(resample(TimeSeries{0.0, 1.0}, 3) == TimeSeries{0.0, 0.5, 1.0});
  CHECK(resample(TimeSeries{0.0, 1.0, 2.0, 3.0}, 2) == TimeSeries{0.0, 3.0});
  CHECK(resample(TimeSeries{5.0}, 3) == TimeSeries{5.0, 5.0, 5.0});
  CHECK_THROWS_AS(resample(TimeSeries{1.0, 2.0}, 0), input_error);

  Rng rng(22);
  for (int t = 0; t < 50; ++t) {
    const auto z = oracle::random_series(rng, 2 + rng.below(8));
    const std::size_t m = 1 + rng.below(10);
    const auto r = resample(z, m);
    CHECK(r.length() == m);
    if (m == z.length()) CHECK(r == z); // exact identity
    if (m >= 2) {
      CHECK(r.value(0) == z.value(0));
      CHECK(r.value(m - 1) == z.value(z.length() - 1));
    }
  }

  // linear data is reproduced exactly up to rounding
  const TimeSeries line{0.0, 1.0, 2.0, 3.0, 4.0};
  const auto up = resample(line, 9);
  for (std::size_t i = 0; i < 9; ++i)
    CHECK(up.value(i) == doctest::Approx(0.5 * static_cast<double>(i)).epsilon(1e-12));
}

TEST_CASE("resample handles multivariate series per feature") {
  const TimeSeries z({0.0, 10.0, 1.0, 20.0}, 2);
  const auto r = resample(z, 3);
  REQUIRE(r.length() == 3);
  CHECK(r.point(1)[0] == 0.5);
  CHECK(r.point(1)[1] == 15.0);
}

TEST_CASE("frechet_variation sums squared DTW distances") {
  const TimeSeries z{0.0};
  const std::vector<TimeSeries> S{TimeSeries{1.0}, TimeSeries{2.0}};
  CHECK(frechet_variation(z, S) == 5.0);
  CHECK_THROWS_AS(frechet_variation(z, {}), input_error);

  Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    std::vector<TimeSeries> set;
    for (int s = 0; s < 4; ++s) set.push_back(oracle::random_series(rng, 1 + rng.below(5)));
    double expect = 0.0;
    for (const auto& x : set) expect += oracle::dtw_squared(set[0], x);
    CHECK(frechet_variation(set[0], set) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("medoid_index picks the variation minimizer with lowest-index ties") {
  const std::vector<TimeSeries> S{TimeSeries{0.0}, TimeSeries{1.0}, TimeSeries{2.0}};
  // variations: 0:(1+4)=5, 1:(1+1)=2, 2:(4+1)=5
  CHECK(medoid_index(S) == 1);
  const std::vector<TimeSeries> T{TimeSeries{1.0}, TimeSeries{1.0}};
  CHECK(medoid_index(T) == 0);
  CHECK_THROWS_AS(medoid_index({}), input_error);
}

TEST_CASE("dba_mean keeps a fixed point fixed") {
  const std::vector<TimeSeries> S{TimeSeries{0.0, 0.0}, TimeSeries{2.0, 2.0}};
  const TimeSeries init{1.0, 1.0};
  const auto r = dba_mean_detailed(S, init);
  CHECK(r.mean == init);
  CHECK(r.iterations == 1);
  REQUIRE(!r.variation.empty());
  CHECK(r.variation.front() == 4.0);
  CHECK(r.variation.back() == 4.0);
}

TEST_CASE("dba_mean of two aligned singletons is their arithmetic mean") {
  const std::vector<TimeSeries> S{TimeSeries{0.0}, TimeSeries{4.0}};
  CHECK(dba_mean(S, TimeSeries{0.0}) == TimeSeries{2.0});
}

TEST_CASE("dba_mean preserves the init length and never increases the variation") {
  Rng rng(24);
  for (int set_id = 0; set_id < 10; ++set_id) {
    std::vector<TimeSeries> S;
    for (int s = 0; s < 6; ++s) S.push_back(oracle::random_series(rng, 8));
    const auto init = S[medoid_index(S)];
    const auto r = dba_mean_detailed(S, init, 30);
    CHECK(r.mean.length() == init.length());
    REQUIRE(r.variation.size() >= 1);
    for (std::size_t i = 1; i < r.variation.size(); ++i)
      CHECK(r.variation[i] <= r.variation[i - 1] + 1e-12);
  }
}

TEST_CASE("dba_mean validates inputs") {
  CHECK_THROWS_AS(dba_mean({}, TimeSeries{1.0}), input_error);
  const std::vector<TimeSeries> S{TimeSeries{0.0}};
  CHECK_THROWS_AS(dba_mean(S, TimeSeries{1.0}, 0), input_error);
  CHECK_THROWS_AS(dba_mean({TimeSeries({1.0, 2.0}, 2)}, TimeSeries{1.0}), input_error);
}
