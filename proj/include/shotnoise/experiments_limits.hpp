#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "shotnoise/fields.hpp"
#include "shotnoise/point_process.hpp"
#include "shotnoise/report.hpp"
#include "shotnoise/response.hpp"

namespace shotnoise {

/// Response, marks and truncation shared by the field experiments.
struct FieldModel {
  std::size_t d = 2;
  double beta = 4.0;
  ResponseKind response = ResponseKind::PurePower;
  double rho = 1.0;
  MarkDistribution marks = Deterministic{1.0};
  double eps_rel = 1e-3;

  [[nodiscard]] ResponseSpec response_spec() const;
};

struct Lemma1Config {
  FieldModel model;
  std::vector<double> lambdas = {1e2, 1e4};
  std::vector<double> t_grid = {0.05, 0.1, 0.2, 0.5, 1.0};
  std::size_t n_reps = 10000;
  Tolerance tol{3.0, 0.01};
};

struct Theorem1Config {
  FieldModel model;
  std::vector<double> lambdas = {1e2, 1e3, 1e4};
  PointList probes = {{0.0, 0.0}, {4.0, 0.0}};
  std::vector<double> t = {0.1, 0.1};
  std::size_t n_reps = 10000;
  Tolerance tol{3.0, 0.01};
};

struct ExtremalConfig {
  FieldModel model;
  std::vector<double> lambdas = {1e4};
  PointList probes = {{0.0, 0.0}, {4.0, 0.0}};
  /// Marginal CDF levels at which the joint CDF is compared; 0 means t = 0.
  std::vector<double> joint_levels = {0.0, 0.25, 0.5, 0.75, 0.9};
  std::size_t n_reps = 10000;
  Tolerance tol{3.0, 0.02};
};

struct GaussianCltConfig {
  double lambda = 1e3;
  std::vector<double> distances = {0.0, 1.0, 2.5};
  std::size_t n_reps = 10000;
  Tolerance tol{3.0, 0.0};
};

void validate(const Tolerance& tol);
void validate(const Lemma1Config& cfg);
void validate(const Theorem1Config& cfg);
void validate(const ExtremalConfig& cfg);
void validate(const GaussianCltConfig& cfg);

/// Field values of one replication per row; rows are replication-indexed.
[[nodiscard]] SampleMatrix simulate_scaled_fields(double lambda, const FieldModel& model,
                                                  const PointList& probes, FieldKind kind,
                                                  std::size_t n_reps, std::uint64_t seed,
                                                  std::size_t workers = 0);

[[nodiscard]] Report lemma1_check(const Lemma1Config& cfg, std::uint64_t seed, std::size_t workers = 0);
[[nodiscard]] Report theorem1_check(const Theorem1Config& cfg, std::uint64_t seed, std::size_t workers = 0);
[[nodiscard]] Report extremal_check(const ExtremalConfig& cfg, std::uint64_t seed, std::size_t workers = 0);
[[nodiscard]] Report gaussian_clt_check(const GaussianCltConfig& cfg, std::uint64_t seed,
                                        std::size_t workers = 0);

/// Area of the intersection of two unit disks whose centres are `distance` apart.
[[nodiscard]] double unit_disk_lens_area(double distance);

/// Throws std::invalid_argument unless all probes are pairwise distinct.
void require_distinct_probes(const PointList& probes);

}  // namespace shotnoise
