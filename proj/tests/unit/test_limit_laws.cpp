#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "shotnoise/limit_laws.hpp"

using namespace shotnoise;

namespace {

constexpr double pi = std::numbers::pi;

// Independent oracle: tanh-sinh on [0,1] and exp-sinh on [1,inf) straight on
// the defining integrand (1 - e^-s) s^(-1-alpha), written as ((1 - e^-s)/s) s^-alpha.
double stable_integral_oracle(double alpha) {
  auto g = [alpha](double s) {
    if (s <= 0.0) return 0.0;
    return -std::expm1(-s) / s * std::pow(s, -alpha);
  };
  boost::math::quadrature::tanh_sinh<double> head;
  boost::math::quadrature::exp_sinh<double> tail;
  return head.integrate(g, 0.0, 1.0, 1e-15) + tail.integrate(g, 1.0, INFINITY, 1e-15);
}

// (omega/beta) int_0^inf P(p > s) s^(alpha-1) ds.
double frechet_scale_oracle(std::size_t d, double beta, const MarkDistribution& dist) {
  const double alpha = static_cast<double>(d) / beta;
  auto g = [&](double s) { return mark_survival(dist, s) * std::pow(s, alpha - 1.0); };
  double integral = 0.0;
  boost::math::quadrature::tanh_sinh<double> finite;
  boost::math::quadrature::exp_sinh<double> infinite;
  if (const auto* m = std::get_if<Deterministic>(&dist)) {
    integral = finite.integrate(g, 0.0, m->value, 1e-15);
  } else if (const auto* m = std::get_if<Pareto>(&dist)) {
    integral = finite.integrate(g, 0.0, m->scale, 1e-15) + infinite.integrate(g, m->scale, INFINITY, 1e-15);
  } else {
    integral = finite.integrate(g, 0.0, 1.0, 1e-15) + infinite.integrate(g, 1.0, INFINITY, 1e-15);
  }
  return omega(d) / beta * integral;
}

double levy_cdf(double s) { return std::erfc(1.0 / (2.0 * std::sqrt(s))); }

struct Moments {
  double mean;
  double se;
};

Moments mc_mean(const std::vector<double>& v) {
  double s = 0.0, ss = 0.0;
  for (double x : v) s += x;
  const double m = s / v.size();
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (v.size() - 1) / v.size())};
}

}  // namespace

TEST_CASE("unit sphere surface area") {
  CHECK(omega(2) == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK(omega(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(omega(3) == doctest::Approx(4.0 * pi).epsilon(1e-15));
}

TEST_CASE("stable constant by quadrature") {
  CHECK(std::fabs(stable_constant(2, 4.0) / std::pow(pi, 1.5) - 1.0) < 1e-8);
  CHECK(stable_constant(2, 3.0) == doctest::Approx(8.416133620056465).epsilon(1e-10));
  for (std::size_t d : {1, 2, 3}) {
    for (double ratio : {1.25, 1.5, 2.0, 3.0}) {
      const double beta = ratio * static_cast<double>(d);
      const double q = stable_constant(d, beta);
      CAPTURE(d);
      CAPTURE(beta);
      CHECK(std::fabs(q / stable_constant_closed_form(d, beta) - 1.0) < 1e-8);
      const double oracle = omega(d) / beta * stable_integral_oracle(1.0 / ratio);
      CHECK(std::fabs(q / oracle - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("stable constant blows up as beta approaches d") {
  CHECK(stable_constant(2, 2.001) > 1e3 * stable_constant(2, 4.0));
  double previous = stable_constant(2, 6.0);
  for (double beta : {5.0, 4.0, 3.0, 2.5, 2.1, 2.01, 2.001}) {
    const double c = stable_constant(2, beta);
    CHECK(c > previous);
    previous = c;
  }
  CHECK_THROWS_AS((void)stable_constant(2, 2.0), std::domain_error);
  CHECK_THROWS_AS((void)stable_constant(2, 1.0), std::domain_error);
}

TEST_CASE("fractional moments") {
  CHECK(fractional_moment(Deterministic{1.0}, 0.37) == 1.0);
  CHECK(fractional_moment(Exponential{1.0}, 0.5) == doctest::Approx(std::sqrt(pi) / 2.0).epsilon(1e-14));
  CHECK(fractional_moment(Pareto{1.0, 3.0}, 0.5) == doctest::Approx(1.2).epsilon(1e-14));
  CHECK_THROWS_AS((void)fractional_moment(Pareto{1.0, 0.4}, 0.5), std::domain_error);
  CHECK_THROWS_AS((void)fractional_moment(Deterministic{1.0}, 1.0), std::domain_error);

  const std::vector<MarkDistribution> dists = {Deterministic{2.0}, Exponential{1.5}, Pareto{0.5, 2.5}};
  for (std::size_t k = 0; k < dists.size(); ++k) {
    RngStream rng(77, k);
    const double alpha = 0.5;
    std::vector<double> draws(1000000);
    for (auto& x : draws) x = std::pow(sample_mark(dists[k], rng), alpha);
    const auto m = mc_mean(draws);
    CAPTURE(k);
    CHECK(std::fabs(m.mean - fractional_moment(dists[k], alpha)) <= 4.0 * m.se + 1e-10 * m.mean);
  }
}

TEST_CASE("Frechet scale") {
  CHECK(frechet_scale(2, 4.0, Deterministic{1.0}) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(frechet_scale(2, 4.0, Deterministic{9.0}) == doctest::Approx(3.0 * pi).epsilon(1e-14));
  CHECK(frechet_scale(2, 4.0, Exponential{1.0}) == doctest::Approx(pi * std::sqrt(pi) / 2.0).epsilon(1e-14));
  const std::vector<MarkDistribution> dists = {Deterministic{1.0}, Deterministic{3.0}, Exponential{1.0},
                                               Exponential{0.2}, Pareto{1.0, 3.0}, Pareto{2.0, 1.5}};
  for (const auto& dist : dists) {
    for (auto [d, beta] : {std::pair<std::size_t, double>{2, 4.0}, {2, 3.0}, {3, 4.5}, {1, 1.8}}) {
      const double gamma = frechet_scale(d, beta, dist);
      CHECK(std::fabs(gamma / frechet_scale_oracle(d, beta, dist) - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("stable Laplace transform") {
  const StableLimit unit(0.5, 1.0);
  CHECK(stable_lt(unit, 0.0) == 1.0);
  CHECK(stable_lt(unit, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  const StableLimit canonical(0.5, std::pow(pi, 1.5));
  CHECK(stable_lt(canonical, 0.1) == doctest::Approx(0.171896982099592).epsilon(1e-12));
  CHECK_THROWS_AS(StableLimit(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(StableLimit(0.5, 0.0), std::invalid_argument);

  // complete monotonicity on a grid: nonincreasing and log-convex
  for (double alpha : {0.2, 0.5, 0.8}) {
    const StableLimit law(alpha, 1.7);
    for (int i = 1; i < 200; ++i) {
      const double h = 0.05;
      const double a = law.laplace((i - 1) * h), b = law.laplace(i * h), c = law.laplace((i + 1) * h);
      REQUIRE(b <= a);
      REQUIRE(std::log(b) <= 0.5 * (std::log(a) + std::log(c)) + 1e-14);
    }
  }
}

TEST_CASE("Frechet CDF") {
  const FrechetLimit law(0.5, pi);
  CHECK(frechet_cdf(law, 0.0) == 0.0);
  CHECK(frechet_cdf(law, pi * pi) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  double previous = 0.0;
  for (int i = 1; i < 2000; ++i) {
    const double v = law.cdf(0.01 * i * i);
    REQUIRE(v >= previous);
    previous = v;
  }
  CHECK(law.cdf(1e30) > 0.9999999);
  CHECK(law.cdf(law.quantile(0.3)) == doctest::Approx(0.3).epsilon(1e-14));
  // max-stability: F_gamma(t)^k = F_{k gamma}(t)
  for (int k : {2, 3, 7}) {
    const FrechetLimit scaled(0.5, k * pi);
    for (double t : {0.5, 3.0, 40.0, 900.0}) {
      CHECK(std::pow(law.cdf(t), k) == doctest::Approx(scaled.cdf(t)).epsilon(1e-13));
    }
  }
}

TEST_CASE("Kanter stable sampler matches the Levy law and the Laplace transform") {
  RngStream rng(123);
  const std::size_t n = 100000;
  std::vector<double> draws(n);
  for (auto& x : draws) x = sample_one_sided_stable(0.5, rng);
  for (double x : draws) REQUIRE(x > 0.0);

  std::vector<double> below(n), kernel(n);
  for (std::size_t i = 0; i < n; ++i) {
    below[i] = draws[i] <= 1.0 ? 1.0 : 0.0;
    kernel[i] = std::exp(-draws[i]);
  }
  const auto cdf = mc_mean(below);
  CHECK(levy_cdf(1.0) == doctest::Approx(0.479500122186953).epsilon(1e-12));
  CHECK(std::fabs(cdf.mean - levy_cdf(1.0)) <= 3.0 * cdf.se);
  const auto lt = mc_mean(kernel);
  CHECK(std::fabs(lt.mean - std::exp(-1.0)) <= 3.0 * lt.se);
}

TEST_CASE("Kanter sampler Laplace transform over a grid of exponents") {
  for (double alpha : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
    RngStream rng(9, static_cast<std::uint64_t>(alpha * 1000));
    std::vector<double> draws(100000);
    for (auto& x : draws) {
      x = sample_one_sided_stable(alpha, rng);
      REQUIRE(x > 0.0);
    }
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
      std::vector<double> k(draws.size());
      for (std::size_t i = 0; i < draws.size(); ++i) k[i] = std::exp(-t * draws[i]);
      const auto m = mc_mean(k);
      CAPTURE(alpha);
      CAPTURE(t);
      CHECK(std::fabs(m.mean - std::exp(-std::pow(t, alpha))) <= 3.0 * m.se);
    }
  }
}

TEST_CASE("limit laws derived from a response") {
  const auto f = ResponseSpec::pure_power(4.0, 2);
  const auto s = stable_limit(f, Exponential{1.0});
  CHECK(s.alpha == 0.5);
  CHECK(s.eta == doctest::Approx(std::pow(pi, 1.5) * std::sqrt(pi) / 2.0).epsilon(1e-10));
  const auto fr = frechet_limit(f, Deterministic{1.0});
  CHECK(fr.gamma == doctest::Approx(pi));
  CHECK(fr.scale() == doctest::Approx(pi * pi));
}
