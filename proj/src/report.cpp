#include "shotnoise/report.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace shotnoise {

bool Tolerance::accepts(double difference, double std_error) const noexcept {
  return std::fabs(difference) <= z_max * std_error + bias_tol;
}

ReportRow make_row(std::string quantity, double lambda, std::vector<double> t, double empirical,
                   double theoretical, double std_error, const Tolerance& tol) {
  ReportRow row;
  row.quantity = std::move(quantity);
  row.lambda = lambda;
  row.t = std::move(t);
  row.empirical = empirical;
  row.theoretical = theoretical;
  row.std_error = std_error;
  const double diff = empirical - theoretical;
  if (std_error > 0.0) {
    row.z = diff / std_error;
  } else {
    row.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  row.pass = tol.accepts(diff, std_error);
  return row;
}

bool Report::pass() const noexcept {
  for (const auto& r : rows)
    if (!r.pass) return false;
  for (const auto& k : ks)
    if (!k.pass) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void Report::add_check(std::string name, bool ok, std::string detail) {
  checks.push_back({std::move(name), ok, std::move(detail)});
}

}  // namespace shotnoise
