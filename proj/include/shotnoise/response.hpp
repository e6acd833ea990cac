#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string_view>

namespace shotnoise {

enum class ResponseKind { PurePower, CompactPower };

[[nodiscard]] std::string_view to_string(ResponseKind kind) noexcept;
/// Accepts "pure_power" / "compact_power"; throws std::invalid_argument otherwise.
[[nodiscard]] ResponseKind parse_response_kind(std::string_view name);

/// Radial response f(r) = r^-beta, optionally cut off beyond rho.
///
/// f(0) is +inf for both kinds. For the pure power law rho only records the
/// split radius used when the response is viewed as a general power-law
/// response (default 1); it does not truncate anything.
class ResponseSpec {
 public:
  ResponseSpec(ResponseKind kind, double beta, double rho, std::size_t dim);

  static ResponseSpec pure_power(double beta, std::size_t dim, double rho = 1.0) {
    return {ResponseKind::PurePower, beta, rho, dim};
  }
  static ResponseSpec compact_power(double beta, double rho, std::size_t dim) {
    return {ResponseKind::CompactPower, beta, rho, dim};
  }

  [[nodiscard]] ResponseKind kind() const noexcept { return kind_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] double rho() const noexcept { return rho_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  /// Scaling exponent beta / d (> 1).
  [[nodiscard]] double kappa() const noexcept { return beta_ / static_cast<double>(dim_); }
  /// Limit-law exponent d / beta (in (0, 1)).
  [[nodiscard]] double alpha() const noexcept { return static_cast<double>(dim_) / beta_; }
  [[nodiscard]] double support_radius() const noexcept {
    return kind_ == ResponseKind::CompactPower ? rho_ : std::numeric_limits<double>::infinity();
  }

  [[nodiscard]] double operator()(double r) const noexcept { return from_squared(r * r); }

  /// f evaluated at distance sqrt(r2); avoids the square root in hot loops.
  [[nodiscard]] double from_squared(double r2) const noexcept {
    if (kind_ == ResponseKind::CompactPower && r2 > rho_ * rho_) return 0.0;
    if (r2 == 0.0) return std::numeric_limits<double>::infinity();
    if (beta_ == 4.0) return 1.0 / (r2 * r2);
    return std::pow(r2, -0.5 * beta_);
  }

  friend bool operator==(const ResponseSpec&, const ResponseSpec&) = default;

 private:
  ResponseKind kind_;
  double beta_;
  double rho_;
  std::size_t dim_;
};

[[nodiscard]] inline double response_eval(const ResponseSpec& f, double r) { return f(r); }

/// omega(d) * int_R^inf r^(d-1) f(r) dr in closed form; R > 0.
[[nodiscard]] double tail_mass(const ResponseSpec& f, double radius);

/// Path loss l(r) = r^beta for link budgets (planar, beta > 2).
class PathLoss {
 public:
  explicit PathLoss(double beta, std::size_t dim = 2);
  [[nodiscard]] double beta() const noexcept { return beta_; }
  /// Throws std::domain_error for r <= 0.
  [[nodiscard]] double operator()(double r) const;

 private:
  double beta_;
};

[[nodiscard]] inline double pathloss_eval(const PathLoss& l, double r) { return l(r); }

}  // namespace shotnoise
