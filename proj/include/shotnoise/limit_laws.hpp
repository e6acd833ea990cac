#pragma once

#include <cstddef>

#include "shotnoise/point_process.hpp"
#include "shotnoise/response.hpp"
#include "shotnoise/rng.hpp"

namespace shotnoise {

/// Surface area of the unit sphere in R^d: 2 pi^(d/2) / Gamma(d/2).
[[nodiscard]] double omega(std::size_t d);

/// int_0^inf (1 - e^-s) s^(-1-alpha) ds for 0 < alpha < 1.
///
/// The unit interval is integrated term by term from the exponential series;
/// the tail is mapped to (0, 1] by s = 1/u, which leaves 1/alpha minus a
/// smooth integral handled by adaptive Gauss-Kronrod.
[[nodiscard]] double stable_integral(double alpha);

/// C(d, beta) = omega(d)/beta * stable_integral(d/beta). Throws std::domain_error for beta <= d.
[[nodiscard]] double stable_constant(std::size_t d, double beta);
/// omega(d) Gamma(1 - alpha) / d; kept only as a cross-check of stable_constant().
[[nodiscard]] double stable_constant_closed_form(std::size_t d, double beta);

/// E[p^alpha] for 0 < alpha < 1.
[[nodiscard]] double fractional_moment(const MarkDistribution& dist, double alpha);

/// gamma(d, beta) = omega(d)/d * E[p^(d/beta)].
[[nodiscard]] double frechet_scale(std::size_t d, double beta, const MarkDistribution& dist);

/// One-sided alpha-stable law with Laplace transform exp(-eta t^alpha).
struct StableLimit {
  StableLimit(double alpha, double eta);

  double alpha;
  double eta;

  [[nodiscard]] double laplace(double t) const;
  /// Scale factor eta^(1/alpha) relating the law to the eta = 1 law.
  [[nodiscard]] double scale() const;
  [[nodiscard]] double sample(RngStream& rng) const;
};

/// Frechet law with CDF exp(-gamma t^-alpha).
struct FrechetLimit {
  FrechetLimit(double alpha, double gamma);

  double alpha;
  double gamma;

  [[nodiscard]] double cdf(double t) const;
  [[nodiscard]] double quantile(double q) const;
  [[nodiscard]] double scale() const;
};

/// Limit of the scaled additive field for response f and marks dist.
[[nodiscard]] StableLimit stable_limit(const ResponseSpec& f, const MarkDistribution& dist);
/// Limit of the scaled extremal field for response f and marks dist.
[[nodiscard]] FrechetLimit frechet_limit(const ResponseSpec& f, const MarkDistribution& dist);

[[nodiscard]] inline double stable_lt(const StableLimit& law, double t) { return law.laplace(t); }
[[nodiscard]] inline double frechet_cdf(const FrechetLimit& law, double t) { return law.cdf(t); }

/// Kanter's representation of a positive stable variable with E[e^-tS] = exp(-t^alpha).
[[nodiscard]] double sample_one_sided_stable(double alpha, RngStream& rng);

}  // namespace shotnoise
