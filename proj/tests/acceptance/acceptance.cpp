// One line per acceptance criterion; exit status 1 if any criterion fails.
//   shotnoise_acceptance [--seeds 1,2,...] [--no-determinism]

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "shotnoise/cli_io.hpp"
#include "shotnoise/estimation.hpp"
#include "shotnoise/format.hpp"
#include "shotnoise/limit_laws.hpp"

using namespace shotnoise;

namespace {

using Clock = std::chrono::steady_clock;

constexpr double pi = std::numbers::pi;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v) { return format_double(round_significant(v, 6)); }

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

bool check_passed(const Report& r, const std::string& name) {
  bool any = false, ok = true;
  for (const auto& c : r.checks)
    if (c.name == name) {
      any = true;
      ok = ok && c.pass;
    }
  return any && ok;
}

// Every acceptance-scale run; summaries are kept so the same runs can be repeated with other worker counts.
struct Runs {
  std::vector<std::string> summaries;
  Report lemma1, theorem1, extremal, clt;
  SirResult sir;
  ChainResult chain;
  SweepResult sweep;
  double lemma1_s = 0, theorem1_s = 0, sweep_s = 0;
};

Runs run_all(std::uint64_t seed, std::size_t workers) {
  Runs out;
  auto config = [&](const char* command) {
    auto cfg = default_config(command);
    cfg.seed = seed;
    return cfg;
  };
  auto t = Clock::now();
  {
    const auto cfg = config("lemma1");
    out.lemma1 = lemma1_check(std::get<Lemma1Config>(cfg.params), seed, workers);
    out.summaries.push_back(summary_json(cfg, out.lemma1));
    out.lemma1_s = seconds_since(t);
  }
  t = Clock::now();
  {
    const auto cfg = config("theorem1");
    out.theorem1 = theorem1_check(std::get<Theorem1Config>(cfg.params), seed, workers);
    out.summaries.push_back(summary_json(cfg, out.theorem1));
    out.theorem1_s = seconds_since(t);
  }
  {
    const auto cfg = config("extremal");
    out.extremal = extremal_check(std::get<ExtremalConfig>(cfg.params), seed, workers);
    out.summaries.push_back(summary_json(cfg, out.extremal));
  }
  {
    const auto cfg = config("gaussian-clt");
    out.clt = gaussian_clt_check(std::get<GaussianCltConfig>(cfg.params), seed, workers);
    out.summaries.push_back(summary_json(cfg, out.clt));
  }
  {
    const auto cfg = config("sir-scaling");
    out.sir = sir_scaling(std::get<SirConfig>(cfg.params), seed, workers);
    out.summaries.push_back(summary_json(cfg, out.sir.report));
  }
  {
    const auto cfg = config("sinr-chain");
    out.chain = sinr_chain_estimate(std::get<ChainConfig>(cfg.params), seed, workers);
    out.summaries.push_back(summary_json(cfg, out.chain.report));
  }
  t = Clock::now();
  {
    const auto cfg = config("percolation");
    out.sweep = percolation_sweep(std::get<PercolationSweepConfig>(cfg.params), seed, workers);
    out.summaries.push_back(summary_json(cfg, out.sweep.report));
    out.sweep_s = seconds_since(t);
  }
  return out;
}

Line constant_oracle() {
  const auto start = Clock::now();
  const double c = stable_constant(2, 4.0);
  const double g = frechet_scale(2, 4.0, Deterministic{1.0});
  const double err_c = std::abs(c / std::pow(pi, 1.5) - 1.0), err_g = std::abs(g / pi - 1.0);
  const double elapsed = seconds_since(start);
  return {1, "constant_oracle", err_c <= 1e-8 && err_g <= 1e-8 && elapsed < 1.0,
          "C(2,4)=" + format_double(c) + " relerr=" + fmt(err_c) + " frechet_scale=" + format_double(g) +
              " relerr=" + fmt(err_g) + " time=" + fmt(elapsed) + "s"};
}

Line lemma1(const Runs& runs) {
  bool ok = true;
  double worst = -1.0;
  std::size_t n = 0;
  for (const auto& row : runs.lemma1.rows) {
    if (row.lambda != 1e4 || row.quantity != "laplace_transform") continue;
    const double t = row.t[0];
    if (t != 0.05 && t != 0.1 && t != 0.2 && t != 0.5) continue;
    const double th = std::exp(-std::pow(pi, 1.5) * std::sqrt(t));
    const double excess = std::abs(row.empirical - th) - 3.0 * row.std_error;
    ok = ok && std::abs(row.theoretical - th) < 1e-12 && excess <= 0.01;
    worst = std::max(worst, excess);
    ++n;
  }
  ok = ok && n == 4 && runs.lemma1.n_reps == 10000 && runs.lemma1_s < 120.0;
  return {2, "lemma1_laplace", ok,
          "t-points=" + std::to_string(n) + " max(|diff|-3SE)=" + fmt(worst) + " allowed=0.01 time=" +
              fmt(runs.lemma1_s) + "s"};
}

Line theorem1(const Runs& runs) {
  const ReportRow* lo = nullptr;
  const ReportRow* hi = nullptr;
  for (const auto& row : runs.theorem1.rows)
    if (row.quantity == "factorization_gap") {
      if (row.lambda == 1e2) lo = &row;
      if (row.lambda == 1e4) hi = &row;
    }
  if (!lo || !hi) return {3, "theorem1_independence", false, "missing gap rows"};
  const bool bounded = std::abs(hi->empirical) <= 3.0 * hi->std_error + 0.01;
  const bool trend = std::abs(hi->empirical) <= std::abs(lo->empirical) + 2.0 * std::hypot(lo->std_error, hi->std_error);
  return {3, "theorem1_independence", bounded && trend && runs.theorem1_s < 240.0,
          "gap(1e2)=" + fmt(lo->empirical) + " gap(1e4)=" + fmt(hi->empirical) + " se(1e4)=" + fmt(hi->std_error) +
              " time=" + fmt(runs.theorem1_s) + "s"};
}

Line extremal(const Runs& runs) {
  const auto& r = runs.extremal;
  bool ok = !r.ks.empty() && std::abs(r.constants.at("frechet_gamma") / pi - 1.0) < 1e-10 &&
            r.constants.at("alpha") == 0.5;
  double worst = 0.0, limit = 0.0;
  for (const auto& k : r.ks) {
    limit = 1.628 / std::sqrt(static_cast<double>(k.ks.n)) + 0.02;
    ok = ok && k.lambda == 1e4 && k.ks.n == 10000 && k.ks.statistic < limit;
    worst = std::max(worst, k.ks.statistic);
  }
  return {4, "frechet_ks", ok, "max D=" + fmt(worst) + " limit=" + fmt(limit)};
}

Line gaussian_clt(const Runs& runs) {
  const ReportRow* d0 = nullptr;
  const ReportRow* d1 = nullptr;
  for (const auto& row : runs.clt.rows)
    if (row.quantity == "covariance") {
      if (row.t[0] == 0.0) d0 = &row;
      if (row.t[0] == 1.0) d1 = &row;
    }
  if (!d0 || !d1) return {5, "gaussian_clt", false, "missing covariance rows"};
  const bool ok0 = std::abs(d0->empirical - pi) <= 3.0 * d0->std_error;
  const bool ok1 = std::abs(d1->empirical - 1.22837) <= 3.0 * d1->std_error;
  return {5, "gaussian_clt", ok0 && ok1,
          "cov(0)=" + fmt(d0->empirical) + " vs pi se=" + fmt(d0->std_error) + " cov(1)=" + fmt(d1->empirical) +
              " vs 1.22837 se=" + fmt(d1->std_error)};
}

Line stable_oracle(std::uint64_t seed) {
  const std::size_t n = 100000;
  const std::uint64_t stream = derive_seed(seed, "acceptance-kanter");
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(stream, i);
    s[i] = sample_one_sided_stable(0.5, rng);
  }
  double below = 0.0;
  for (double v : s) below += v <= 1.0 ? 1.0 : 0.0;
  const double p = below / static_cast<double>(n);
  const double p_want = std::erfc(0.5);
  const double p_se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  const double t1 = 1.0;
  const auto lt = empirical_lt(s, std::span<const double>(&t1, 1));
  const bool ok = std::abs(p - p_want) <= 3.0 * p_se && std::abs(lt.estimates[0] - std::exp(-1.0)) <= 3.0 * lt.std_errors[0];
  return {6, "kanter_stable_oracle", ok,
          "cdf(1)=" + fmt(p) + " vs " + fmt(p_want) + " se=" + fmt(p_se) + " lt(1)=" + fmt(lt.estimates[0]) +
              " vs " + fmt(std::exp(-1.0)) + " se=" + fmt(lt.std_errors[0])};
}

Line sir(const Runs& runs) {
  const SirRow* lo = nullptr;
  const SirRow* hi = nullptr;
  for (const auto& row : runs.sir.rows)
    if (row.c == 0.01) {
      if (row.lambda == 1e2) lo = &row;
      if (row.lambda == 1e4) hi = &row;
    }
  if (!lo || !hi) return {7, "sir_scaling", false, "missing c=0.01 rows"};
  const bool stable = std::abs(hi->estimate - lo->estimate) <= 2.0 * std::hypot(hi->se, lo->se) + 0.02;
  bool oracle = true;
  for (const auto* row : {lo, hi})
    oracle = oracle && std::abs(row->estimate - row->bound) <= 3.0 * std::hypot(row->se, row->bound_se) + 0.02;
  return {7, "sir_scaling", stable && oracle,
          "p(1e2)=" + fmt(lo->estimate) + " p(1e4)=" + fmt(hi->estimate) + " oracle=" + fmt(hi->bound) +
              " se=" + fmt(hi->se)};
}

Line chain(const Runs& runs) {
  const ChainRow* at = nullptr;
  for (const auto& row : runs.chain.rows)
    if (row.c == 0.01) at = &row;
  if (!at) return {8, "sinr_chain", false, "missing c=0.01 row"};
  const bool above = at->estimate >= at->bound - 3.0 * std::hypot(at->se, at->bound_se);
  const auto cfg = std::get<ChainConfig>(default_config("sinr-chain").params);
  const ChainRow* last = nullptr;
  for (const auto& row : runs.chain.rows)
    if (row.c == cfg.c_sweep.back()) last = &row;
  const bool limit = last && last->estimate >= 0.9 && check_passed(runs.chain.report, "sweep_nondecreasing_as_c_decreases");
  return {8, "sinr_chain", above && limit && cfg.k == 3 && cfg.lambda == 1e3,
          "p(c=0.01)=" + fmt(at->estimate) + " bound=" + fmt(at->bound) + " p(c=" + fmt(cfg.c_sweep.back()) +
              ")=" + (last ? fmt(last->estimate) : std::string("?"))};
}

Line percolation(const Runs& runs) {
  const auto& r = runs.sweep.report;
  const bool phases = check_passed(r, "supercritical_phase_present") && check_passed(r, "subcritical_phase_present");
  const bool labels = check_passed(r, "union_find_matches_flood_fill");
  const ReportRow* cov = nullptr;
  for (const auto& row : r.rows)
    if (row.quantity == "occupation_covariance") cov = &row;
  const bool uncorrelated = cov && std::abs(cov->empirical) <= 3.0 * cov->std_error;
  double max_cross = 0.0, min_cross = 1.0;
  for (const auto& row : runs.sweep.rows) {
    max_cross = std::max(max_cross, row.crossing_freq);
    min_cross = std::min(min_cross, row.crossing_freq);
  }
  return {9, "percolation_sweep", phases && labels && uncorrelated && runs.sweep_s < 600.0,
          "crossing range [" + fmt(min_cross) + ", " + fmt(max_cross) + "] cov=" + (cov ? fmt(cov->empirical) : "?") +
              " se=" + (cov ? fmt(cov->std_error) : "?") + " labels=" + (labels ? "match" : "differ") +
              " time=" + fmt(runs.sweep_s) + "s"};
}

Line determinism(const Runs& reference, std::uint64_t seed, std::size_t workers) {
  const auto again = run_all(seed, workers);
  std::size_t same = 0;
  for (std::size_t i = 0; i < reference.summaries.size(); ++i)
    same += reference.summaries[i] == again.summaries[i] ? 1 : 0;
  return {10, "determinism", same == reference.summaries.size(),
          std::to_string(same) + "/" + std::to_string(reference.summaries.size()) +
              " summaries byte-identical with workers 1 vs " + std::to_string(workers)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<std::uint64_t> seeds = {1};
  bool skip_determinism = false;
  std::size_t other_workers = 3;
  app.add_option("--seeds", seeds, "Seeds to run")->delimiter(',');
  app.add_flag("--no-determinism", skip_determinism, "Skip criterion 10");
  app.add_option("--workers", other_workers, "Worker count compared against 1 for criterion 10");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  auto report = [&](const Line& l, std::uint64_t seed) {
    std::printf("criterion %2d  %-22s  seed=%-3llu  %s  %s\n", l.id, l.name.c_str(),
                static_cast<unsigned long long>(seed), l.pass ? "PASS" : "FAIL", l.detail.c_str());
    std::fflush(stdout);
    failed += l.pass ? 0 : 1;
  };
  for (const auto seed : seeds) {
    report(constant_oracle(), seed);
    const auto runs = run_all(seed, 1);
    report(lemma1(runs), seed);
    report(theorem1(runs), seed);
    report(extremal(runs), seed);
    report(gaussian_clt(runs), seed);
    report(stable_oracle(seed), seed);
    report(sir(runs), seed);
    report(chain(runs), seed);
    report(percolation(runs), seed);
    if (!skip_determinism) report(determinism(runs, seed, other_workers), seed);
  }
  std::printf("%d criterion line(s) failed\n", failed);
  return failed == 0 ? 0 : 1;
}
