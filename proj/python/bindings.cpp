#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "shotnoise/cli_io.hpp"
#include "shotnoise/limit_laws.hpp"

namespace py = pybind11;
using namespace shotnoise;

namespace {

RunConfig parse(const std::string& text, const std::string& command) {
  try {
    return load_config(text, command);
  } catch (const ConfigError& e) {
    throw py::value_error(e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_shotnoise, m) {
  m.doc() = "Shot-noise limit laws and SINR network experiments";
  m.attr("__version__") = std::string(library_version());

  m.def("commands", &command_names);
  m.def(
      "default_config", [](const std::string& command) { return serialize_config(default_config(command)); },
      py::arg("command"));
  m.def(
      "normalize_config",
      [](const std::string& text, const std::string& command) { return serialize_config(parse(text, command)); },
      py::arg("text"), py::arg("command") = "",
      "Validate a JSON config and return it with every default filled in.");
  m.def(
      "run",
      [](const std::string& text, const std::filesystem::path& out_dir, std::size_t workers,
         std::optional<std::uint64_t> seed) {
        auto cfg = parse(text, "");
        if (seed) cfg.seed = *seed;
        RunResult result;
        {
          py::gil_scoped_release release;
          result = run(cfg, out_dir, workers);
        }
        return py::make_tuple(result.exit_code, summary_json(cfg, result.report), result.files);
      },
      py::arg("config"), py::arg("out_dir"), py::arg("workers") = 0, py::arg("seed") = py::none(),
      "Run a configured command; returns (exit_code, summary_json, written_files).");

  m.def("stable_constant", &stable_constant, py::arg("d"), py::arg("beta"));
  m.def(
      "frechet_scale",
      [](std::size_t d, double beta, double mark) { return frechet_scale(d, beta, Deterministic{mark}); },
      py::arg("d"), py::arg("beta"), py::arg("mark") = 1.0, "Frechet scale for deterministic marks.");
  m.def(
      "sample_one_sided_stable",
      [](double alpha, std::size_t n, std::uint64_t seed) {
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
          RngStream rng(seed, i);
          out[i] = sample_one_sided_stable(alpha, rng);
        }
        return out;
      },
      py::arg("alpha"), py::arg("n"), py::arg("seed") = 1,
      "Positive stable draws with Laplace transform exp(-t^alpha).");
}
