#include "shotnoise/response.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "shotnoise/limit_laws.hpp"

namespace shotnoise {

std::string_view to_string(ResponseKind kind) noexcept {
  return kind == ResponseKind::PurePower ? "pure_power" : "compact_power";
}

ResponseKind parse_response_kind(std::string_view name) {
  if (name == "pure_power") return ResponseKind::PurePower;
  if (name == "compact_power") return ResponseKind::CompactPower;
  throw std::invalid_argument("unknown response kind '" + std::string(name) + "'");
}

ResponseSpec::ResponseSpec(ResponseKind kind, double beta, double rho, std::size_t dim)
    : kind_(kind), beta_(beta), rho_(rho), dim_(dim) {
  if (dim_ == 0) throw std::invalid_argument("dimension must be at least 1");
  if (!(beta_ > static_cast<double>(dim_)) || !std::isfinite(beta_)) {
    throw std::invalid_argument("beta must exceed d");
  }
  if (!(rho_ > 0.0) || !std::isfinite(rho_)) throw std::invalid_argument("rho must be positive");
}

double tail_mass(const ResponseSpec& f, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("tail radius must be positive");
  const double d = static_cast<double>(f.dim());
  const double excess = f.beta() - d;
  const double w = omega(f.dim());
  if (f.kind() == ResponseKind::PurePower) return w * std::pow(radius, -excess) / excess;
  if (radius >= f.rho()) return 0.0;
  return w * (std::pow(radius, -excess) - std::pow(f.rho(), -excess)) / excess;
}

PathLoss::PathLoss(double beta, std::size_t dim) : beta_(beta) {
  if (!(beta_ > static_cast<double>(dim)) || !std::isfinite(beta_)) {
    throw std::invalid_argument("beta must exceed d");
  }
}

double PathLoss::operator()(double r) const {
  if (!(r > 0.0)) throw std::domain_error("path loss needs a positive link length");
  return std::pow(r, beta_);
}

}  // namespace shotnoise
