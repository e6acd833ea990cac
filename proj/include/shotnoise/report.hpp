#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shotnoise/estimation.hpp"

namespace shotnoise {

/// A comparison passes when |empirical - theoretical| <= z_max * SE + bias_tol.
struct Tolerance {
  double z_max = 3.0;
  double bias_tol = 0.01;

  [[nodiscard]] bool accepts(double difference, double std_error) const noexcept;
};

struct ReportRow {
  std::string quantity;
  double lambda = 0.0;
  std::vector<double> t;
  double empirical = 0.0;
  double theoretical = 0.0;
  double std_error = 0.0;
  double z = 0.0;  // +-inf when the SE is zero and the values differ
  bool pass = true;
  std::optional<std::size_t> probe;
};

[[nodiscard]] ReportRow make_row(std::string quantity, double lambda, std::vector<double> t,
                                 double empirical, double theoretical, double std_error,
                                 const Tolerance& tol);

struct KsRow {
  double lambda = 0.0;
  std::size_t probe = 0;
  KsResult ks;
  double bias_tol = 0.0;
  bool pass = true;
};

struct Metric {
  std::string name;
  double lambda = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

/// Outcome of one experiment command.
struct Report {
  std::string experiment;
  std::size_t n_reps = 0;
  std::vector<ReportRow> rows;
  std::vector<KsRow> ks;
  std::vector<Metric> metrics;
  std::vector<Check> checks;
  std::map<std::string, double> constants;
  double runtime_s = 0.0;

  [[nodiscard]] bool pass() const noexcept;
  void add_check(std::string name, bool ok, std::string detail = {});
};

}  // namespace shotnoise
