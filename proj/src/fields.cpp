#include "shotnoise/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "shotnoise/format.hpp"
#include "shotnoise/limit_laws.hpp"

namespace shotnoise {

namespace {

void check_probes(const PointList& probes, std::size_t dim) {
  for (const auto& z : probes) {
    if (z.size() != dim) throw std::invalid_argument("probe dimension does not match the field");
  }
}

double squared_distance(std::span<const double> x, const std::vector<double>& z) {
  double r2 = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double dx = x[k] - z[k];
    r2 += dx * dx;
  }
  return r2;
}

FieldSample empty_sample(const MarkedConfiguration& config, const ResponseSpec& f,
                         const PointList& probes, FieldKind kind) {
  if (config.dim() != f.dim()) throw std::invalid_argument("response and window dimensions differ");
  check_probes(probes, f.dim());
  FieldSample s;
  s.probes = probes;
  s.values.assign(probes.size(), 0.0);
  s.intensity = config.intensity();
  s.kappa = f.kappa();
  s.kind = kind;
  return s;
}

}  // namespace

std::string_view to_string(FieldKind kind) noexcept {
  return kind == FieldKind::Additive ? "additive" : "extremal";
}

FieldKind parse_field_kind(std::string_view name) {
  if (name == "additive") return FieldKind::Additive;
  if (name == "extremal") return FieldKind::Extremal;
  throw std::invalid_argument("unknown field kind '" + std::string(name) + "'");
}

double probe_hull_radius(const PointList& probes) {
  double hull = 0.0;
  for (const auto& z : probes) {
    double n2 = 0.0;
    for (double x : z) n2 += x * x;
    hull = std::max(hull, std::sqrt(n2));
  }
  return hull;
}

FieldSample additive_field(const MarkedConfiguration& config, const ResponseSpec& f,
                           const PointList& probes) {
  auto s = empty_sample(config, f, probes, FieldKind::Additive);
  std::vector<std::pair<double, double>> terms;
  terms.reserve(config.size());
  for (std::size_t j = 0; j < probes.size(); ++j) {
    terms.clear();
    for (std::size_t i = 0; i < config.size(); ++i) {
      const double r2 = squared_distance(config.point(i), probes[j]);
      const double v = config.mark(i) * f.from_squared(r2);
      if (v > 0.0) terms.emplace_back(r2, v);
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (const auto& [r2, v] : terms) sum += v;
    s.values[j] = sum;
  }
  return s;
}

FieldSample extremal_field(const MarkedConfiguration& config, const ResponseSpec& f,
                           const PointList& probes) {
  auto s = empty_sample(config, f, probes, FieldKind::Extremal);
  for (std::size_t j = 0; j < probes.size(); ++j) {
    double best = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i) {
      best = std::max(best, config.mark(i) * f.from_squared(squared_distance(config.point(i), probes[j])));
    }
    s.values[j] = best;
  }
  return s;
}

FieldSample scale_field(FieldSample s) {
  if (s.scaled) throw std::logic_error("field sample is already scaled");
  if (s.intensity > 0.0) {
    const double factor = std::pow(s.intensity, -s.kappa);
    for (auto& v : s.values) v *= factor;
  }
  s.scaled = true;
  return s;
}

TruncationPlan plan_truncation(double intensity, double mean_mark, const ResponseSpec& f,
                               double hull_radius, double eps_abs) {
  if (!(intensity >= 0.0)) throw std::invalid_argument("intensity must be nonnegative");
  if (!(mean_mark > 0.0)) throw std::invalid_argument("mean mark must be positive");
  if (!(hull_radius >= 0.0)) throw std::invalid_argument("probe hull radius must be nonnegative");
  if (!(eps_abs > 0.0)) throw std::invalid_argument("truncation tolerance must be positive");
  double local = f.rho();
  if (f.kind() == ResponseKind::PurePower && intensity > 0.0) {
    const double excess = f.beta() - static_cast<double>(f.dim());
    local = std::pow(intensity * mean_mark * omega(f.dim()) / (excess * eps_abs), 1.0 / excess);
  }
  return {hull_radius + local, hull_radius, eps_abs};
}

double default_truncation_eps(double intensity, const ResponseSpec& f,
                              const MarkDistribution& dist, FieldKind kind, double eps_rel) {
  if (!(eps_rel > 0.0)) throw std::invalid_argument("relative truncation tolerance must be positive");
  const double scale = kind == FieldKind::Additive ? stable_limit(f, dist).scale()
                                                   : frechet_limit(f, dist).scale();
  const double raw_units = intensity > 0.0 ? std::pow(intensity, f.kappa()) : 1.0;
  return eps_rel * scale * raw_units;
}

MarkedConfiguration sample_probe_region(double intensity, const MarkDistribution& dist,
                                        const PointList& probes, const TruncationPlan& plan,
                                        RngStream& rng) {
  if (probes.empty()) throw std::invalid_argument("at least one probe is required");
  const std::size_t d = probes.front().size();
  check_probes(probes, d);
  if (probe_hull_radius(probes) > plan.probe_hull_radius * (1.0 + 1e-12) + 1e-300) {
    throw std::invalid_argument("probe lies outside the truncation plan's hull");
  }
  const double r = plan.local_radius();
  if (!(r > 0.0)) throw std::invalid_argument("simulation radius must exceed the probe hull");
  const double r2 = r * r;

  std::vector<double> coords;
  for (std::size_t j = 0; j < probes.size(); ++j) {
    const auto ball = Window::ball(probes[j], r);
    const auto local = sample_ppp(ball, intensity, rng);
    for (std::size_t i = 0; i < local.size(); ++i) {
      const auto x = local.point(i);
      bool covered = false;
      for (std::size_t l = 0; l < j && !covered; ++l) covered = squared_distance(x, probes[l]) < r2;
      if (!covered) coords.insert(coords.end(), x.begin(), x.end());
    }
  }
  auto marks = sample_marks(coords.size() / d, dist, rng);
  return {Window::ball(std::vector<double>(d, 0.0), plan.simulation_radius), intensity,
          std::move(coords), std::move(marks)};
}

FieldSample sample_scaled_field(double intensity, const ResponseSpec& f,
                                const MarkDistribution& dist, const PointList& probes,
                                FieldKind kind, const TruncationPlan& plan, RngStream& rng) {
  const auto config = sample_probe_region(intensity, dist, probes, plan, rng);
  auto raw = kind == FieldKind::Additive ? additive_field(config, f, probes)
                                         : extremal_field(config, f, probes);
  return scale_field(std::move(raw));
}

void write_replications_csv(std::ostream& os, std::span<const FieldSample> replications) {
  os << "replication,probe_index,value,scaled,kind\n";
  for (std::size_t r = 0; r < replications.size(); ++r) {
    const auto& s = replications[r];
    for (std::size_t j = 0; j < s.values.size(); ++j) {
      os << r << ',' << j << ',' << format_double(s.values[j]) << ','
         << (s.scaled ? "true" : "false") << ',' << to_string(s.kind) << '\n';
    }
  }
}

}  // namespace shotnoise
