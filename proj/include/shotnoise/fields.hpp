#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "shotnoise/point_process.hpp"
#include "shotnoise/response.hpp"
#include "shotnoise/rng.hpp"

namespace shotnoise {

using PointList = std::vector<std::vector<double>>;

enum class FieldKind { Additive, Extremal };

[[nodiscard]] std::string_view to_string(FieldKind kind) noexcept;
[[nodiscard]] FieldKind parse_field_kind(std::string_view name);

/// Values of a shot-noise field at a set of probes.
struct FieldSample {
  PointList probes;
  std::vector<double> values;
  double intensity = 0.0;
  double kappa = 1.0;
  bool scaled = false;
  FieldKind kind = FieldKind::Additive;
};

/// Radius bookkeeping for simulating an infinite-plane field on a bounded region.
///
/// Every point within local_radius() of a probe is simulated, so the
/// expected omitted additive mass at any probe is at most eps_abs.
struct TruncationPlan {
  double simulation_radius = 1.0;
  double probe_hull_radius = 0.0;
  double eps_abs = 1.0;

  [[nodiscard]] double local_radius() const noexcept {
    return simulation_radius - probe_hull_radius;
  }
};

/// Largest Euclidean norm among the probes.
[[nodiscard]] double probe_hull_radius(const PointList& probes);

/// value[j] = sum_i p_i f(|x_i - z_j|), accumulated in ascending distance.
[[nodiscard]] FieldSample additive_field(const MarkedConfiguration& config, const ResponseSpec& f,
                                         const PointList& probes);

/// value[j] = max_i p_i f(|x_i - z_j|); 0 for an empty configuration.
[[nodiscard]] FieldSample extremal_field(const MarkedConfiguration& config, const ResponseSpec& f,
                                         const PointList& probes);

/// Multiply by intensity^-kappa. Throws std::logic_error if already scaled.
[[nodiscard]] FieldSample scale_field(FieldSample s);

/// Smallest radius R with intensity * mean_mark * tail_mass(f, R - hull) <= eps_abs.
/// Compact responses always get hull + rho.
[[nodiscard]] TruncationPlan plan_truncation(double intensity, double mean_mark,
                                             const ResponseSpec& f, double hull_radius,
                                             double eps_abs);

/// eps_rel times the limit-law scale, expressed in unscaled field units.
[[nodiscard]] double default_truncation_eps(double intensity, const ResponseSpec& f,
                                            const MarkDistribution& dist, FieldKind kind,
                                            double eps_rel = 1e-3);

/// Marked PPP on the union of the balls B(z_j, plan.local_radius()).
///
/// The returned configuration reports Ball{0, plan.simulation_radius} as its
/// window, which contains the union.
[[nodiscard]] MarkedConfiguration sample_probe_region(double intensity,
                                                      const MarkDistribution& dist,
                                                      const PointList& probes,
                                                      const TruncationPlan& plan, RngStream& rng);

/// One replication of the scaled additive or extremal field at the probes.
[[nodiscard]] FieldSample sample_scaled_field(double intensity, const ResponseSpec& f,
                                              const MarkDistribution& dist,
                                              const PointList& probes, FieldKind kind,
                                              const TruncationPlan& plan, RngStream& rng);

/// Header `replication,probe_index,value,scaled,kind`; infinities as `inf`.
void write_replications_csv(std::ostream& os, std::span<const FieldSample> replications);

}  // namespace shotnoise
