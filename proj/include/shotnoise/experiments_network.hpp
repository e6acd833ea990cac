#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "shotnoise/point_process.hpp"
#include "shotnoise/report.hpp"
#include "shotnoise/response.hpp"
#include "shotnoise/rng.hpp"

namespace shotnoise {

struct ConstantNoise {
  double value = 0.0;
};
struct ExponentialNoise {
  double mean = 1.0;
};
/// Receiver noise W.
using NoiseDistribution = std::variant<ConstantNoise, ExponentialNoise>;

void validate(const NoiseDistribution& noise);
[[nodiscard]] double sample_noise(const NoiseDistribution& noise, RngStream& rng);
/// P(W <= x).
[[nodiscard]] double noise_cdf(const NoiseDistribution& noise, double x);

struct SirConfig {
  double beta = 4.0;
  MarkDistribution fading = Deterministic{1.0};
  NoiseDistribution noise = ConstantNoise{0.0};
  std::vector<double> c_list = {0.1, 0.01, 0.001};
  std::vector<double> lambdas = {1e2, 1e4};
  std::size_t n_reps = 10000;
  std::size_t oracle_draws = 1000000;
  double eps_rel = 1e-3;
  Tolerance tol{3.0, 0.02};
  /// Tolerance for comparing the first and last lambda.
  Tolerance trend_tol{2.0, 0.02};
};

struct SirRow {
  double lambda = 0.0;
  double c = 0.0;
  double estimate = 0.0;
  double se = 0.0;
  double bound = 0.0;  // stable-oracle prediction P(F0 >= c xi)
  double bound_se = 0.0;
};

struct SirResult {
  std::vector<SirRow> rows;
  Report report;
};

void validate(const SirConfig& cfg);

/// P(F0 >= c lambda^-beta I_{lambda^2}(e1)) for every c, one realization per replication.
[[nodiscard]] std::vector<SirRow> sir_tail_estimate(const SirConfig& cfg, double lambda,
                                                    std::uint64_t seed, std::size_t workers = 0);
[[nodiscard]] SirResult sir_scaling(const SirConfig& cfg, std::uint64_t seed, std::size_t workers = 0);

struct ChainConfig {
  double beta = 4.0;
  std::size_t k = 3;
  double spacing = 1.0;
  double lambda = 1e3;
  MarkDistribution fading = Deterministic{1.0};
  NoiseDistribution noise = ConstantNoise{0.0};
  /// The first entry is the one checked against the lower bound.
  double c_check = 0.01;
  std::vector<double> c_sweep = {1.0, 0.1, 0.01, 0.001, 1e-4};
  double final_min = 0.9;
  std::size_t n_reps = 10000;
  std::size_t oracle_draws = 1000000;
  double eps_rel = 1e-3;
  double z_max = 3.0;
};

struct ChainRow {
  double lambda = 0.0;
  double c = 0.0;
  double estimate = 0.0;
  double se = 0.0;
  double bound = 0.0;
  double bound_se = 0.0;
  /// Joint probability of the first j+2 nodes' links (j = 0 is a single link).
  std::vector<double> prefix_estimates;
};

struct ChainResult {
  std::vector<ChainRow> rows;
  Report report;
};

void validate(const ChainConfig& cfg);

/// Lower bound [P(xi < g/(2 sqrt c)) P(p >= sqrt c) P(W <= 1/sqrt c)]^(k-1), g = 1/l(spacing).
[[nodiscard]] double chain_lower_bound(double p_xi, double fading_tail, double noise_cdf_value,
                                       std::size_t k);

[[nodiscard]] ChainResult sinr_chain_estimate(const ChainConfig& cfg, std::uint64_t seed,
                                              std::size_t workers = 0);

struct PercolationConfig {
  std::size_t lattice_size = 50;
  double beta = 4.0;
  double rho = 1.5;
  double lambda = 1.0;
  double c = 1.0;
  MarkDistribution fading = Exponential{1.0};
  MarkDistribution interferer_marks = Deterministic{1.0};
  NoiseDistribution noise = ConstantNoise{0.0};
};

/// Per-site inputs of the occupation rule for one realization.
struct LatticeField {
  std::size_t size = 0;
  std::vector<double> interference;  // I_lambda(f; z), row-major with index y * size + x
  std::vector<double> noise;         // W_z
  std::vector<double> min_fading;    // min of the four incoming edge fadings
};

struct PercolationOutcome {
  std::size_t size = 0;
  std::vector<char> occupied;
  std::size_t origin_cluster_size = 0;
  bool origin_reaches_boundary = false;
  bool crossing = false;
  double p_hat = 0.0;

  [[nodiscard]] bool at(std::size_t x, std::size_t y) const { return occupied[y * size + x] != 0; }
};

void validate(const PercolationConfig& cfg);

[[nodiscard]] LatticeField sample_lattice_field(const PercolationConfig& cfg, RngStream& rng);

/// Occupied iff (min g / f(1)) / (W + I) >= c lambda^-kappa; a zero denominator always occupies.
[[nodiscard]] std::vector<char> occupation(const LatticeField& field, const PercolationConfig& cfg);

[[nodiscard]] PercolationOutcome summarize_lattice(std::size_t size, std::vector<char> occupied);

[[nodiscard]] PercolationOutcome percolation_realization(const PercolationConfig& cfg, RngStream& rng);

/// Canonical cluster labels: the smallest site index in the cluster, -1 for empty sites.
[[nodiscard]] std::vector<long> label_clusters_union_find(std::size_t size, const std::vector<char>& occupied);
[[nodiscard]] std::vector<long> label_clusters_flood_fill(std::size_t size, const std::vector<char>& occupied);

struct PercolationSweepConfig {
  PercolationConfig base;
  std::vector<double> lambdas = {1.0, 10.0, 100.0};
  std::vector<double> c_list = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 1e-1};
  std::size_t n_reps = 100;
  double high = 0.8;
  double low = 0.2;
  /// Occupation-correlation check between two sites more than 2 rho + 2 apart.
  std::size_t correlation_reps = 10000;
  double correlation_lambda = 10.0;
  double correlation_c = 3e-3;
  /// Random grids compared between union-find and flood fill.
  std::size_t labelling_grids = 1000;
  double z_max = 3.0;
};

struct PhaseRow {
  double lambda = 0.0;
  double c = 0.0;
  double p_hat = 0.0;
  double p_hat_se = 0.0;
  double crossing_freq = 0.0;
  double mean_origin_cluster = 0.0;
};

struct SweepResult {
  std::vector<PhaseRow> rows;
  Report report;
};

void validate(const PercolationSweepConfig& cfg);

[[nodiscard]] SweepResult percolation_sweep(const PercolationSweepConfig& cfg, std::uint64_t seed,
                                            std::size_t workers = 0);

/// Header `lambda,c,estimate,se,bound`.
void write_sir_csv(std::ostream& os, const std::vector<SirRow>& rows);
void write_chain_csv(std::ostream& os, const std::vector<ChainRow>& rows);
/// Header `lambda,c,p_hat,p_hat_se,crossing_freq,mean_origin_cluster`.
void write_phase_csv(std::ostream& os, const std::vector<PhaseRow>& rows);

}  // namespace shotnoise
