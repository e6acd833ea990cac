#include "shotnoise/cli_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "shotnoise/format.hpp"
#include "shotnoise/limit_laws.hpp"
#include "shotnoise/parallel.hpp"

namespace shotnoise {

using json = nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// ---------------------------------------------------------------------------
// decoding

double read_double(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + " must be finite");
  return v;
}

std::uint64_t read_u64(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ConfigError(where + " must be a nonnegative integer");
}

std::vector<double> read_doubles(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_double(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

PointList read_points(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of coordinate arrays");
  PointList out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_doubles(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string read_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + " must be a string");
  return j.get<std::string>();
}

// Object reader that rejects keys nobody asked for.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(label() + " must be an object");
  }

  const json* find(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  void number(const char* key, double& out) {
    if (const auto* v = find(key)) out = read_double(*v, path(key));
  }
  void count(const char* key, std::size_t& out) {
    if (const auto* v = find(key)) out = static_cast<std::size_t>(read_u64(*v, path(key)));
  }
  void numbers(const char* key, std::vector<double>& out) {
    if (const auto* v = find(key)) out = read_doubles(*v, path(key));
  }
  void points(const char* key, PointList& out) {
    if (const auto* v = find(key)) out = read_points(*v, path(key));
  }
  void done() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw ConfigError("unknown key '" + path(item.key()) + "'");
  }

 private:
  std::string label() const { return where_.empty() ? "config" : where_; }
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

MarkDistribution read_marks(const json& j, const std::string& where) {
  Fields f(j, where);
  const auto* t = f.find("type");
  if (!t) throw ConfigError(where + ".type is required");
  const auto type = read_string(*t, where + ".type");
  MarkDistribution out;
  if (type == "deterministic") {
    Deterministic d;
    f.number("value", d.value);
    out = d;
  } else if (type == "exponential") {
    Exponential e;
    f.number("mean", e.mean);
    out = e;
  } else if (type == "pareto") {
    Pareto p;
    f.number("scale", p.scale);
    f.number("shape", p.shape);
    out = p;
  } else {
    throw ConfigError(where + ".type must be deterministic, exponential or pareto");
  }
  f.done();
  return out;
}

NoiseDistribution read_noise(const json& j, const std::string& where) {
  Fields f(j, where);
  const auto* t = f.find("type");
  if (!t) throw ConfigError(where + ".type is required");
  const auto type = read_string(*t, where + ".type");
  NoiseDistribution out;
  if (type == "constant") {
    ConstantNoise c;
    f.number("value", c.value);
    out = c;
  } else if (type == "exponential") {
    ExponentialNoise e;
    f.number("mean", e.mean);
    out = e;
  } else {
    throw ConfigError(where + ".type must be constant or exponential");
  }
  f.done();
  return out;
}

void read_tolerance(Fields& f, const char* key, Tolerance& tol) {
  if (const auto* v = f.find(key)) {
    Fields t(*v, f.path(key));
    t.number("z_max", tol.z_max);
    t.number("bias_tol", tol.bias_tol);
    t.done();
  }
}

void read_model(Fields& f, FieldModel& m) {
  if (const auto* v = f.find("d")) m.d = static_cast<std::size_t>(read_u64(*v, f.path("d")));
  f.number("beta", m.beta);
  if (const auto* v = f.find("response")) {
    try {
      m.response = parse_response_kind(read_string(*v, f.path("response")));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(f.path("response") + ": " + e.what());
    }
  }
  f.number("rho", m.rho);
  if (const auto* v = f.find("marks")) m.marks = read_marks(*v, f.path("marks"));
  f.number("eps_rel", m.eps_rel);
}

void read_params(Fields& f, SimulateFieldConfig& c) {
  read_model(f, c.model);
  f.number("lambda", c.lambda);
  f.points("probes", c.probes);
  if (const auto* v = f.find("kind")) {
    try {
      c.kind = parse_field_kind(read_string(*v, f.path("kind")));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(f.path("kind") + ": " + e.what());
    }
  }
  f.numbers("t_grid", c.t_grid);
  f.count("n_reps", c.n_reps);
  read_tolerance(f, "tolerance", c.tol);
}

void read_params(Fields& f, Lemma1Config& c) {
  read_model(f, c.model);
  f.numbers("lambdas", c.lambdas);
  f.numbers("t_grid", c.t_grid);
  f.count("n_reps", c.n_reps);
  read_tolerance(f, "tolerance", c.tol);
}

void read_params(Fields& f, Theorem1Config& c) {
  read_model(f, c.model);
  f.numbers("lambdas", c.lambdas);
  f.points("probes", c.probes);
  f.numbers("t", c.t);
  f.count("n_reps", c.n_reps);
  read_tolerance(f, "tolerance", c.tol);
}

void read_params(Fields& f, ExtremalConfig& c) {
  read_model(f, c.model);
  f.numbers("lambdas", c.lambdas);
  f.points("probes", c.probes);
  f.numbers("joint_levels", c.joint_levels);
  f.count("n_reps", c.n_reps);
  read_tolerance(f, "tolerance", c.tol);
}

void read_params(Fields& f, GaussianCltConfig& c) {
  f.number("lambda", c.lambda);
  f.numbers("distances", c.distances);
  f.count("n_reps", c.n_reps);
  read_tolerance(f, "tolerance", c.tol);
}

void read_params(Fields& f, SirConfig& c) {
  f.number("beta", c.beta);
  if (const auto* v = f.find("fading")) c.fading = read_marks(*v, f.path("fading"));
  if (const auto* v = f.find("noise")) c.noise = read_noise(*v, f.path("noise"));
  f.numbers("c_list", c.c_list);
  f.numbers("lambdas", c.lambdas);
  f.count("n_reps", c.n_reps);
  f.count("oracle_draws", c.oracle_draws);
  f.number("eps_rel", c.eps_rel);
  read_tolerance(f, "tolerance", c.tol);
  read_tolerance(f, "trend_tolerance", c.trend_tol);
}

void read_params(Fields& f, ChainConfig& c) {
  f.number("beta", c.beta);
  f.count("k", c.k);
  f.number("spacing", c.spacing);
  f.number("lambda", c.lambda);
  if (const auto* v = f.find("fading")) c.fading = read_marks(*v, f.path("fading"));
  if (const auto* v = f.find("noise")) c.noise = read_noise(*v, f.path("noise"));
  f.number("c_check", c.c_check);
  f.numbers("c_sweep", c.c_sweep);
  f.number("final_min", c.final_min);
  f.count("n_reps", c.n_reps);
  f.count("oracle_draws", c.oracle_draws);
  f.number("eps_rel", c.eps_rel);
  f.number("z_max", c.z_max);
}

void read_params(Fields& f, PercolationSweepConfig& c) {
  f.count("lattice_size", c.base.lattice_size);
  f.number("beta", c.base.beta);
  f.number("rho", c.base.rho);
  if (const auto* v = f.find("fading")) c.base.fading = read_marks(*v, f.path("fading"));
  if (const auto* v = f.find("interferer_marks")) c.base.interferer_marks = read_marks(*v, f.path("interferer_marks"));
  if (const auto* v = f.find("noise")) c.base.noise = read_noise(*v, f.path("noise"));
  f.numbers("lambdas", c.lambdas);
  f.numbers("c_list", c.c_list);
  f.count("n_reps", c.n_reps);
  f.number("high", c.high);
  f.number("low", c.low);
  f.count("correlation_reps", c.correlation_reps);
  f.number("correlation_lambda", c.correlation_lambda);
  f.number("correlation_c", c.correlation_c);
  f.count("labelling_grids", c.labelling_grids);
  f.number("z_max", c.z_max);
}

// ---------------------------------------------------------------------------
// encoding

json encode(const MarkDistribution& m) {
  return std::visit(overloaded{[](const Deterministic& d) { return json{{"type", "deterministic"}, {"value", d.value}}; },
                               [](const Exponential& e) { return json{{"type", "exponential"}, {"mean", e.mean}}; },
                               [](const Pareto& p) {
                                 return json{{"type", "pareto"}, {"scale", p.scale}, {"shape", p.shape}};
                               }},
                    m);
}

json encode(const NoiseDistribution& n) {
  return std::visit(overloaded{[](const ConstantNoise& c) { return json{{"type", "constant"}, {"value", c.value}}; },
                               [](const ExponentialNoise& e) { return json{{"type", "exponential"}, {"mean", e.mean}}; }},
                    n);
}

json encode(const Tolerance& t) { return json{{"z_max", t.z_max}, {"bias_tol", t.bias_tol}}; }

void encode_model(json& j, const FieldModel& m) {
  j["d"] = m.d;
  j["beta"] = m.beta;
  j["response"] = std::string(to_string(m.response));
  j["rho"] = m.rho;
  j["marks"] = encode(m.marks);
  j["eps_rel"] = m.eps_rel;
}

json encode(const SimulateFieldConfig& c) {
  json j;
  encode_model(j, c.model);
  j["lambda"] = c.lambda;
  j["probes"] = c.probes;
  j["kind"] = std::string(to_string(c.kind));
  j["t_grid"] = c.t_grid;
  j["n_reps"] = c.n_reps;
  j["tolerance"] = encode(c.tol);
  return j;
}

json encode(const Lemma1Config& c) {
  json j;
  encode_model(j, c.model);
  j["lambdas"] = c.lambdas;
  j["t_grid"] = c.t_grid;
  j["n_reps"] = c.n_reps;
  j["tolerance"] = encode(c.tol);
  return j;
}

json encode(const Theorem1Config& c) {
  json j;
  encode_model(j, c.model);
  j["lambdas"] = c.lambdas;
  j["probes"] = c.probes;
  j["t"] = c.t;
  j["n_reps"] = c.n_reps;
  j["tolerance"] = encode(c.tol);
  return j;
}

json encode(const ExtremalConfig& c) {
  json j;
  encode_model(j, c.model);
  j["lambdas"] = c.lambdas;
  j["probes"] = c.probes;
  j["joint_levels"] = c.joint_levels;
  j["n_reps"] = c.n_reps;
  j["tolerance"] = encode(c.tol);
  return j;
}

json encode(const GaussianCltConfig& c) {
  return json{{"lambda", c.lambda}, {"distances", c.distances}, {"n_reps", c.n_reps}, {"tolerance", encode(c.tol)}};
}

json encode(const SirConfig& c) {
  return json{{"beta", c.beta},           {"fading", encode(c.fading)},
              {"noise", encode(c.noise)}, {"c_list", c.c_list},
              {"lambdas", c.lambdas},     {"n_reps", c.n_reps},
              {"oracle_draws", c.oracle_draws}, {"eps_rel", c.eps_rel},
              {"tolerance", encode(c.tol)},     {"trend_tolerance", encode(c.trend_tol)}};
}

json encode(const ChainConfig& c) {
  return json{{"beta", c.beta},       {"k", c.k},
              {"spacing", c.spacing}, {"lambda", c.lambda},
              {"fading", encode(c.fading)}, {"noise", encode(c.noise)},
              {"c_check", c.c_check}, {"c_sweep", c.c_sweep},
              {"final_min", c.final_min}, {"n_reps", c.n_reps},
              {"oracle_draws", c.oracle_draws}, {"eps_rel", c.eps_rel},
              {"z_max", c.z_max}};
}

json encode(const PercolationSweepConfig& c) {
  return json{{"lattice_size", c.base.lattice_size},
              {"beta", c.base.beta},
              {"rho", c.base.rho},
              {"fading", encode(c.base.fading)},
              {"interferer_marks", encode(c.base.interferer_marks)},
              {"noise", encode(c.base.noise)},
              {"lambdas", c.lambdas},
              {"c_list", c.c_list},
              {"n_reps", c.n_reps},
              {"high", c.high},
              {"low", c.low},
              {"correlation_reps", c.correlation_reps},
              {"correlation_lambda", c.correlation_lambda},
              {"correlation_c", c.correlation_c},
              {"labelling_grids", c.labelling_grids},
              {"z_max", c.z_max}};
}

json encode_config(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["seed"] = cfg.seed;
  j["params"] = std::visit([](const auto& p) { return encode(p); }, cfg.params);
  j["output"] = json{{"csv", cfg.csv}, {"json", cfg.json}};
  return j;
}

// non-finite values become null
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json encode_report(const Report& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json o{{"quantity", row.quantity},
           {"lambda", row.lambda},
           {"t", row.t},
           {"empirical", number_or_null(row.empirical)},
           {"theoretical", number_or_null(row.theoretical)},
           {"std_error", number_or_null(row.std_error)},
           {"z", number_or_null(row.z)},
           {"pass", row.pass}};
    if (row.probe) o["probe"] = *row.probe;
    rows.push_back(std::move(o));
  }
  json ks = json::array();
  for (const auto& k : r.ks) {
    ks.push_back(json{{"lambda", k.lambda},
                      {"probe", k.probe},
                      {"statistic", k.ks.statistic},
                      {"n", k.ks.n},
                      {"critical_1pct", k.ks.critical_1pct},
                      {"bias_tol", k.bias_tol},
                      {"pass", k.pass}});
  }
  json metrics = json::array();
  for (const auto& m : r.metrics)
    metrics.push_back(json{{"name", m.name}, {"lambda", m.lambda}, {"value", number_or_null(m.value)},
                           {"std_error", number_or_null(m.std_error)}});
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  json constants = json::object();
  for (const auto& [k, v] : r.constants) constants[k] = round_significant(v, 12);
  return json{{"experiment", r.experiment}, {"n_reps", r.n_reps}, {"rows", rows},   {"ks", ks},
              {"metrics", metrics},         {"checks", checks},   {"constants", constants}, {"pass", r.pass()}};
}

void validate(const SimulateFieldConfig& c) {
  const auto f = c.model.response_spec();
  if (!(c.lambda >= 0.0) || !std::isfinite(c.lambda)) throw std::invalid_argument("lambda must be nonnegative");
  if (c.probes.empty()) throw std::invalid_argument("at least one probe is required");
  for (const auto& z : c.probes)
    if (z.size() != f.dim()) throw std::invalid_argument("probe dimension must equal d");
  for (double t : c.t_grid)
    if (!(t >= 0.0)) throw std::invalid_argument("t_grid must be nonnegative");
  if (c.n_reps < 2) throw std::invalid_argument("n_reps must be at least 2");
  validate(c.tol);
}

template <class Params>
void validate_params(const Params& p) {
  validate(p);
}

CommandParams default_params(std::string_view command) {
  if (command == "simulate-field") return SimulateFieldConfig{};
  if (command == "lemma1") return Lemma1Config{};
  if (command == "theorem1") return Theorem1Config{};
  if (command == "extremal") return ExtremalConfig{};
  if (command == "gaussian-clt") return GaussianCltConfig{};
  if (command == "sir-scaling") return SirConfig{};
  if (command == "sinr-chain") return ChainConfig{};
  if (command == "percolation") return PercolationSweepConfig{};
  throw ConfigError("unknown command '" + std::string(command) + "'");
}

// ---------------------------------------------------------------------------
// running

Report simulate_field(const SimulateFieldConfig& c, std::uint64_t seed, std::size_t workers,
                      std::vector<FieldSample>& samples) {
  const auto start = std::chrono::steady_clock::now();
  const auto f = c.model.response_spec();
  const double eps = default_truncation_eps(c.lambda, f, c.model.marks, c.kind, c.model.eps_rel);
  const auto plan = plan_truncation(c.lambda, mark_mean(c.model.marks), f, probe_hull_radius(c.probes), eps);
  const std::uint64_t stream = derive_seed(seed, "simulate-field");
  samples = replicate<FieldSample>(
      c.n_reps,
      [&](std::size_t i) {
        RngStream rng(stream, i);
        return sample_scaled_field(c.lambda, f, c.model.marks, c.probes, c.kind, plan, rng);
      },
      workers);

  Report r;
  r.experiment = "simulate-field";
  r.n_reps = c.n_reps;
  r.constants["kappa"] = f.kappa();
  r.constants["simulation_radius"] = plan.simulation_radius;
  r.constants["eps_abs"] = plan.eps_abs;
  for (std::size_t j = 0; j < c.probes.size(); ++j) {
    std::vector<double> column(c.n_reps);
    for (std::size_t i = 0; i < c.n_reps; ++i) column[i] = samples[i].values[j];
    if (c.kind == FieldKind::Additive) {
      const auto law = stable_limit(f, c.model.marks);
      r.constants["eta"] = law.eta;
      const auto lt = empirical_lt(column, c.t_grid);
      for (std::size_t k = 0; k < c.t_grid.size(); ++k) {
        auto row = make_row("laplace_transform", c.lambda, {c.t_grid[k]}, lt.estimates[k], law.laplace(c.t_grid[k]),
                            lt.std_errors[k], c.tol);
        row.probe = j;
        r.rows.push_back(std::move(row));
      }
    } else {
      const auto law = frechet_limit(f, c.model.marks);
      r.constants["frechet_gamma"] = law.gamma;
      KsRow k;
      k.lambda = c.lambda;
      k.probe = j;
      k.ks = ks_distance(column, [&](double t) { return law.cdf(t); });
      k.bias_tol = c.tol.bias_tol;
      k.pass = k.ks.statistic < k.ks.critical_1pct + c.tol.bias_tol;
      r.ks.push_back(k);
    }
  }
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void write_rows_csv(std::ostream& os, const Report& r) {
  os << "quantity,lambda,t,probe,empirical,theoretical,std_error,z,pass\n";
  for (const auto& row : r.rows) {
    std::string t;
    for (std::size_t i = 0; i < row.t.size(); ++i) t += (i ? ";" : "") + format_double(row.t[i]);
    os << row.quantity << ',' << format_double(row.lambda) << ',' << t << ','
       << (row.probe ? std::to_string(*row.probe) : std::string()) << ',' << format_double(row.empirical) << ','
       << format_double(row.theoretical) << ',' << format_double(row.std_error) << ',' << format_double(row.z) << ','
       << (row.pass ? "true" : "false") << '\n';
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"simulate-field", "lemma1",      "theorem1",   "extremal",
                                                 "gaussian-clt",   "sir-scaling", "sinr-chain", "percolation"};
  return names;
}

bool is_command(std::string_view name) {
  const auto& n = command_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

std::string_view library_version() noexcept { return SHOTNOISE_VERSION; }

RunConfig default_config(std::string_view command) {
  RunConfig cfg;
  cfg.params = default_params(command);
  cfg.command = std::string(command);
  cfg.csv = cfg.command + ".csv";
  cfg.json = cfg.command + ".json";
  return cfg;
}

RunConfig load_config(std::string_view text, std::string_view command) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  Fields top(doc, "");
  std::string name(command);
  if (const auto* c = top.find("command")) {
    const auto declared = read_string(*c, "command");
    if (!name.empty() && declared != name)
      throw ConfigError("config is for '" + declared + "' but the command line asks for '" + name + "'");
    name = declared;
  }
  if (name.empty()) throw ConfigError("no command given");
  if (!is_command(name)) throw ConfigError("unknown command '" + name + "'");
  RunConfig cfg = default_config(name);
  if (const auto* s = top.find("seed")) cfg.seed = read_u64(*s, "seed");
  if (const auto* p = top.find("params")) {
    Fields f(*p, "params");
    std::visit([&](auto& params) { read_params(f, params); }, cfg.params);
    f.done();
  }
  if (const auto* o = top.find("output")) {
    Fields f(*o, "output");
    if (const auto* v = f.find("csv")) cfg.csv = read_string(*v, "output.csv");
    if (const auto* v = f.find("json")) cfg.json = read_string(*v, "output.json");
    f.done();
    for (const auto* file : {&cfg.csv, &cfg.json}) {
      const std::filesystem::path path(*file);
      if (file->empty() || path.has_parent_path() || path.is_absolute())
        throw ConfigError("output file names must be plain names inside the output directory");
    }
  }
  top.done();
  try {
    std::visit([](const auto& params) { validate_params(params); }, cfg.params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid params: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("invalid params: ") + e.what());
  }
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path, std::string_view command) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << is.rdbuf();
  return load_config(text.str(), command);
}

std::string serialize_config(const RunConfig& cfg) { return encode_config(cfg).dump(2) + "\n"; }

std::string summary_json(const RunConfig& cfg, const Report& report) {
  json j = encode_report(report);
  j["version"] = std::string(library_version());
  j["seed"] = cfg.seed;
  j["command"] = cfg.command;
  j["config"] = encode_config(cfg);
  return j.dump(2) + "\n";
}

RunResult run(const RunConfig& cfg, const std::filesystem::path& out_dir, std::size_t workers) {
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  RunResult result;
  std::ostringstream csv;
  std::visit(overloaded{[&](const SimulateFieldConfig& c) {
                          std::vector<FieldSample> samples;
                          result.report = simulate_field(c, cfg.seed, workers, samples);
                          write_replications_csv(csv, samples);
                        },
                        [&](const Lemma1Config& c) {
                          result.report = lemma1_check(c, cfg.seed, workers);
                          write_rows_csv(csv, result.report);
                        },
                        [&](const Theorem1Config& c) {
                          result.report = theorem1_check(c, cfg.seed, workers);
                          write_rows_csv(csv, result.report);
                        },
                        [&](const ExtremalConfig& c) {
                          result.report = extremal_check(c, cfg.seed, workers);
                          write_rows_csv(csv, result.report);
                        },
                        [&](const GaussianCltConfig& c) {
                          result.report = gaussian_clt_check(c, cfg.seed, workers);
                          write_rows_csv(csv, result.report);
                        },
                        [&](const SirConfig& c) {
                          auto out = sir_scaling(c, cfg.seed, workers);
                          write_sir_csv(csv, out.rows);
                          result.report = std::move(out.report);
                        },
                        [&](const ChainConfig& c) {
                          auto out = sinr_chain_estimate(c, cfg.seed, workers);
                          write_chain_csv(csv, out.rows);
                          result.report = std::move(out.report);
                        },
                        [&](const PercolationSweepConfig& c) {
                          auto out = percolation_sweep(c, cfg.seed, workers);
                          write_phase_csv(csv, out.rows);
                          result.report = std::move(out.report);
                        }},
             cfg.params);

  const auto csv_path = out_dir / cfg.csv;
  const auto json_path = out_dir / cfg.json;
  const auto timing_path = out_dir / (cfg.command + ".timing.json");
  write_file(csv_path, csv.str());
  write_file(json_path, summary_json(cfg, result.report));
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const json timing{{"command", cfg.command},
                    {"runtime_s", total},
                    {"experiment_runtime_s", result.report.runtime_s},
                    {"workers", workers == 0 ? default_worker_count() : workers}};
  write_file(timing_path, timing.dump(2) + "\n");
  result.files = {csv_path, json_path, timing_path};
  result.exit_code = result.report.pass() ? 0 : 1;
  return result;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Monte Carlo checks of shot-noise limit laws and SINR network consequences", "shotnoise"};
  app.set_version_flag("--version", std::string(library_version()));
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string commands;
  for (const auto& n : command_names()) commands += (commands.empty() ? "" : ", ") + n;
  app.add_option("command", command, "One of: " + commands)->required();
  app.add_option("--config", config_path, "JSON configuration file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--out-dir", out_dir, "Directory for CSV and JSON outputs");
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (!is_command(command)) {
    std::cerr << "shotnoise: unknown command '" << command << "' (expected one of: " << commands << ")\n";
    return 2;
  }
  RunConfig cfg;
  try {
    cfg = load_config_file(config_path, command);
  } catch (const ConfigError& e) {
    std::cerr << "shotnoise: " << e.what() << '\n';
    return 2;
  }
  if (seed_opt->count() > 0) cfg.seed = seed;
  try {
    const auto result = run(cfg, out_dir);
    std::cout << cfg.command << ": " << (result.exit_code == 0 ? "pass" : "FAIL") << " ("
              << (out_dir.empty() ? "." : out_dir) << '/' << cfg.json << ")\n";
    for (const auto& c : result.report.checks)
      if (!c.pass) std::cout << "  failed check " << c.name << (c.detail.empty() ? "" : " [" + c.detail + "]") << '\n';
    for (const auto& row : result.report.rows)
      if (!row.pass) std::cout << "  failed row " << row.quantity << " lambda=" << format_double(row.lambda) << '\n';
    for (const auto& k : result.report.ks)
      if (!k.pass) std::cout << "  failed ks probe=" << k.probe << " lambda=" << format_double(k.lambda) << '\n';
    return result.exit_code;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "shotnoise: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "shotnoise: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "shotnoise: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace shotnoise
