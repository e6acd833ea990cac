#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shotnoise/experiments_limits.hpp"
#include "shotnoise/experiments_network.hpp"
#include "shotnoise/fields.hpp"
#include "shotnoise/report.hpp"

namespace shotnoise {

/// Raised for malformed or invalid configuration documents (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulateFieldConfig {
  FieldModel model;
  double lambda = 1e4;
  PointList probes = {{0.0, 0.0}};
  FieldKind kind = FieldKind::Additive;
  std::vector<double> t_grid = {0.05, 0.1, 0.2, 0.5, 1.0};
  std::size_t n_reps = 1000;
  Tolerance tol{3.0, 0.01};
};

using CommandParams = std::variant<SimulateFieldConfig, Lemma1Config, Theorem1Config, ExtremalConfig,
                                   GaussianCltConfig, SirConfig, ChainConfig, PercolationSweepConfig>;

struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  CommandParams params;
  std::string csv;   // file name inside the output directory
  std::string json;  // file name inside the output directory
};

[[nodiscard]] const std::vector<std::string>& command_names();
[[nodiscard]] bool is_command(std::string_view name);

/// Config with every default filled in for `command`.
[[nodiscard]] RunConfig default_config(std::string_view command);

/// Parse and validate a JSON document. `command` (if non-empty) must agree with
/// the document's own "command" key when that is present.
[[nodiscard]] RunConfig load_config(std::string_view text, std::string_view command = {});
[[nodiscard]] RunConfig load_config_file(const std::filesystem::path& path, std::string_view command = {});

/// Canonical JSON text (sorted keys, shortest round-trip floats).
[[nodiscard]] std::string serialize_config(const RunConfig& cfg);

/// Summary document written to `<json>`; independent of timing and worker count.
[[nodiscard]] std::string summary_json(const RunConfig& cfg, const Report& report);

struct RunResult {
  int exit_code = 0;
  Report report;
  std::vector<std::filesystem::path> files;
};

/// Execute the command and write the CSV, JSON summary and timing sidecar into out_dir.
[[nodiscard]] RunResult run(const RunConfig& cfg, const std::filesystem::path& out_dir, std::size_t workers = 0);

/// Entry point of the command-line tool; returns the process exit status.
int cli_main(int argc, char** argv);

[[nodiscard]] std::string_view library_version() noexcept;

}  // namespace shotnoise
