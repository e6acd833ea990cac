#include "shotnoise/limit_laws.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>

namespace shotnoise {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
}

void require_beta(std::size_t d, double beta) {
  if (d == 0) throw std::invalid_argument("dimension must be at least 1");
  if (!(beta > static_cast<double>(d))) throw std::domain_error("beta must exceed d");
}

}  // namespace

double omega(std::size_t d) {
  if (d == 0) throw std::invalid_argument("dimension must be at least 1");
  const double half = 0.5 * static_cast<double>(d);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double stable_integral(double alpha) {
  require_alpha(alpha);
  // int_0^1 (1 - e^-s) s^(-1-alpha) ds = sum_k (-1)^(k+1) / (k! (k - alpha))
  double head = 0.0;
  double factorial = 1.0;
  for (int k = 1; k < 60; ++k) {
    factorial *= k;
    const double term = 1.0 / (factorial * (k - alpha));
    head += (k % 2 == 1) ? term : -term;
    if (term < 1e-18 * std::fabs(head)) break;
  }
  // int_1^inf (1 - e^-s) s^(-1-alpha) ds = 1/alpha - int_0^1 e^(-1/u) u^(alpha-1) du
  auto smooth = [alpha](double u) {
    return u <= 0.0 ? 0.0 : std::exp(-1.0 / u) * std::pow(u, alpha - 1.0);
  };
  double error = 0.0;
  const double tail_correction =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(smooth, 0.0, 1.0, 20, 1e-14,
                                                                    &error);
  return head + 1.0 / alpha - tail_correction;
}

double stable_constant(std::size_t d, double beta) {
  require_beta(d, beta);
  const double alpha = static_cast<double>(d) / beta;
  return omega(d) / beta * stable_integral(alpha);
}

double stable_constant_closed_form(std::size_t d, double beta) {
  require_beta(d, beta);
  const double alpha = static_cast<double>(d) / beta;
  return omega(d) * std::tgamma(1.0 - alpha) / static_cast<double>(d);
}

double fractional_moment(const MarkDistribution& dist, double alpha) {
  require_alpha(alpha);
  if (const auto* p = std::get_if<Pareto>(&dist); p != nullptr && !(p->shape > alpha)) {
    throw std::domain_error("pareto shape must exceed the moment order");
  }
  validate(dist);
  if (const auto* m = std::get_if<Deterministic>(&dist)) return std::pow(m->value, alpha);
  if (const auto* m = std::get_if<Exponential>(&dist)) {
    return std::pow(m->mean, alpha) * std::tgamma(1.0 + alpha);
  }
  const auto& m = std::get<Pareto>(dist);
  return m.shape * std::pow(m.scale, alpha) / (m.shape - alpha);
}

double frechet_scale(std::size_t d, double beta, const MarkDistribution& dist) {
  require_beta(d, beta);
  const double alpha = static_cast<double>(d) / beta;
  return omega(d) / static_cast<double>(d) * fractional_moment(dist, alpha);
}

StableLimit::StableLimit(double alpha_, double eta_) : alpha(alpha_), eta(eta_) {
  require_alpha(alpha);
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be positive");
}

double StableLimit::laplace(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("Laplace argument must be nonnegative");
  return std::exp(-eta * std::pow(t, alpha));
}

double StableLimit::scale() const { return std::pow(eta, 1.0 / alpha); }

double StableLimit::sample(RngStream& rng) const {
  return scale() * sample_one_sided_stable(alpha, rng);
}

FrechetLimit::FrechetLimit(double alpha_, double gamma_) : alpha(alpha_), gamma(gamma_) {
  require_alpha(alpha);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
}

double FrechetLimit::cdf(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("CDF argument must be nonnegative");
  if (t == 0.0) return 0.0;
  return std::exp(-gamma * std::pow(t, -alpha));
}

double FrechetLimit::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1)");
  return std::pow(gamma / -std::log(q), 1.0 / alpha);
}

double FrechetLimit::scale() const { return std::pow(gamma, 1.0 / alpha); }

StableLimit stable_limit(const ResponseSpec& f, const MarkDistribution& dist) {
  const double alpha = f.alpha();
  return {alpha, fractional_moment(dist, alpha) * stable_constant(f.dim(), f.beta())};
}

FrechetLimit frechet_limit(const ResponseSpec& f, const MarkDistribution& dist) {
  return {f.alpha(), frechet_scale(f.dim(), f.beta(), dist)};
}

double sample_one_sided_stable(double alpha, RngStream& rng) {
  require_alpha(alpha);
  const double theta = std::numbers::pi * rng.uniform_open();
  const double e = rng.exponential();
  const double a = std::sin(alpha * theta) / std::pow(std::sin(theta), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * theta) / e, (1.0 - alpha) / alpha);
  return a * b;
}

}  // namespace shotnoise
