#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "shotnoise/estimation.hpp"
#include "shotnoise/rng.hpp"

using namespace shotnoise;

namespace {

SampleMatrix exponential_pairs(std::size_t n, std::uint64_t seed, bool identical) {
  SampleMatrix m(n, 2);
  RngStream rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, 0) = rng.exponential();
    m(i, 1) = identical ? m(i, 0) : rng.exponential();
  }
  return m;
}

}  // namespace

TEST_CASE("laplace kernel conventions") {
  CHECK(laplace_kernel(0.0, INFINITY) == 1.0);
  CHECK(laplace_kernel(0.5, INFINITY) == 0.0);
  CHECK(laplace_kernel(1.0, std::log(2.0)) == doctest::Approx(0.5));
}

TEST_CASE("empirical Laplace transform") {
  const std::vector<double> zeros(10, 0.0);
  const std::vector<double> grid = {0.0, 0.5, 3.0};
  const auto z = empirical_lt(zeros, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(z.estimates[i] == 1.0);
    CHECK(z.std_errors[i] == 0.0);
  }
  CHECK(z.n == 10);

  const std::vector<double> ln2 = {std::log(2.0), std::log(2.0)};
  const std::vector<double> one = {1.0};
  CHECK(empirical_lt(ln2, one).estimates[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS((void)empirical_lt(std::vector<double>{}, one));
  CHECK_THROWS((void)empirical_lt(std::vector<double>{1.0}, one));
  CHECK_THROWS((void)empirical_lt(ln2, std::vector<double>{-1.0}));

  const std::vector<double> with_inf = {INFINITY, 0.0};
  const auto inf_lt = empirical_lt(with_inf, grid);
  CHECK(inf_lt.estimates[0] == 1.0);
  CHECK(inf_lt.estimates[1] == 0.5);

  RngStream rng(17);
  std::vector<double> x(100000);
  for (auto& v : x) v = rng.exponential();
  const auto lt = empirical_lt(x, one);
  CHECK(std::fabs(lt.estimates[0] - 0.5) <= 3.0 * lt.std_errors[0]);

  // values in [0, 1] and nonincreasing in t
  std::vector<double> fine;
  for (int i = 0; i <= 100; ++i) fine.push_back(0.1 * i);
  const auto curve = empirical_lt(std::span(x).first(1000), fine);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    REQUIRE(curve.estimates[i] >= 0.0);
    REQUIRE(curve.estimates[i] <= 1.0);
    if (i > 0) REQUIRE(curve.estimates[i] <= curve.estimates[i - 1]);
  }
}

TEST_CASE("LT CSV") {
  LtEstimate lt;
  lt.t_grid = {0.0, 1.0};
  lt.estimates = {1.0, 0.25};
  lt.std_errors = {0.0, 0.125};
  lt.n = 4;
  std::ostringstream os;
  write_lt_csv(os, lt);
  CHECK(os.str() == "t,estimate,std_error,n\n0,1,0,4\n1,0.25,0.125,4\n");
}

TEST_CASE("empirical joint Laplace transform") {
  const auto ind = exponential_pairs(100000, 3, false);
  const std::vector<double> zero = {0.0, 0.0}, ones = {1.0, 1.0};
  CHECK(empirical_joint_lt(ind, zero) == 1.0);
  const auto j = empirical_joint_lt_estimate(ind, ones);
  CHECK(std::fabs(j.estimate - 0.25) <= 3.0 * j.std_error);

  const auto same = exponential_pairs(1000, 4, true);
  const std::vector<double> two = {2.0};
  SampleMatrix first(same.rows(), 1);
  for (std::size_t i = 0; i < same.rows(); ++i) first(i, 0) = same(i, 0);
  CHECK(empirical_joint_lt(same, ones) == doctest::Approx(empirical_joint_lt(first, two)).epsilon(1e-14));

  CHECK_THROWS((void)empirical_joint_lt(ind, std::vector<double>{1.0}));

  // joint LT is bounded by each marginal with the other coordinates zeroed
  const std::vector<double> t = {0.7, 1.3};
  const double joint = empirical_joint_lt(ind, t);
  CHECK(joint <= empirical_joint_lt(ind, std::vector<double>{0.7, 0.0}));
  CHECK(joint <= empirical_joint_lt(ind, std::vector<double>{0.0, 1.3}));
}

TEST_CASE("factorization gap") {
  const std::vector<double> ones = {1.0, 1.0};
  const auto ind = exponential_pairs(100000, 5, false);
  const auto g = factorization_gap_estimate(ind, ones);
  CHECK(g.gap <= 3.0 * g.std_error);
  CHECK(g.std_error > 0.0);

  const auto same = exponential_pairs(20000, 6, true);
  std::vector<double> e(same.rows());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(-same(i, 0));
  double m = 0.0, ss = 0.0;
  for (double v : e) m += v;
  m /= e.size();
  for (double v : e) ss += (v - m) * (v - m);
  const double gap = factorization_gap(same, ones);
  CHECK(gap > 0.0);
  CHECK(gap == doctest::Approx(ss / e.size()).epsilon(1e-10));

  CHECK(factorization_gap(same, std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(factorization_gap(ind, std::vector<double>{0.8, 0.0}) <= 1e-15);
  CHECK(factorization_gap(ind, std::vector<double>{0.0, 2.5}) <= 1e-15);

  SampleMatrix single(10, 1);
  CHECK_THROWS((void)factorization_gap(single, std::vector<double>{1.0}));
}

TEST_CASE("Kolmogorov-Smirnov distance") {
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const std::vector<double> half = {0.5};
  const auto single = ks_distance(half, uniform);
  CHECK(single.statistic == 0.5);
  CHECK(single.n == 1);
  CHECK(ks_distance(half, [](double) { return 0.0; }).statistic == 1.0);
  CHECK_THROWS((void)ks_distance(std::vector<double>{}, uniform));

  const auto ks1000 = ks_distance(std::vector<double>(1000, 0.25), uniform);
  CHECK(ks1000.critical_1pct == doctest::Approx(1.628 / std::sqrt(1000.0)));

  // calibration: the rejection rate at the 1% critical value is about 1%
  int below = 0;
  const int trials = 2000;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng(99, trial);
    std::vector<double> x(1000);
    for (auto& v : x) v = -std::log1p(-rng.uniform());
    const auto ks = ks_distance(x, [](double v) { return v <= 0.0 ? 0.0 : -std::expm1(-v); });
    below += ks.statistic < ks.critical_1pct;
  }
  const double rejected = trials - below;
  CHECK(rejected <= 0.01 * trials + 3.0 * std::sqrt(0.01 * 0.99 * trials));

  // invariance under a strictly increasing map applied to samples and reference
  RngStream rng(100);
  std::vector<double> x(500), y(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform();
    y[i] = std::exp(3.0 * x[i]);
  }
  const double a = ks_distance(x, uniform).statistic;
  const double b = ks_distance(y, [&](double v) { return uniform(std::log(v) / 3.0); }).statistic;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("sample mean and covariance") {
  SampleMatrix constant(50, 3);
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = 0; j < 3; ++j) constant(i, j) = double(j) + 0.5;
  const auto c = sample_mean_cov(constant);
  for (double v : c.cov) CHECK(v == 0.0);
  CHECK(c.mean[2] == 2.5);

  RngStream rng(7);
  SampleMatrix normal(100000, 2);
  for (std::size_t i = 0; i < normal.rows(); ++i) {
    normal(i, 0) = rng.normal();
    normal(i, 1) = rng.normal();
  }
  const auto mc = sample_mean_cov(normal);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(std::fabs(mc(i, j) - (i == j ? 1.0 : 0.0)) <= 3.0 * covariance_std_error(normal, i, j));
    }
  }

  SampleMatrix correlated(1000, 2);
  for (std::size_t i = 0; i < correlated.rows(); ++i) correlated(i, 0) = correlated(i, 1) = rng.normal();
  const auto cc = sample_mean_cov(correlated);
  CHECK(cc(0, 1) == doctest::Approx(cc(0, 0)).epsilon(1e-14));
  CHECK(cc(1, 0) == cc(0, 1));

  CHECK_THROWS((void)sample_mean_cov(SampleMatrix(1, 2)));
}

TEST_CASE("mean estimate") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  const auto m = mean_estimate(v);
  CHECK(m.estimate == 2.5);
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(m.n == 4);
}
