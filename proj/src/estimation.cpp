#include "shotnoise/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "shotnoise/format.hpp"

namespace shotnoise {

namespace {

void require_rows(std::size_t n, std::size_t minimum) {
  if (n == 0) throw std::invalid_argument("sample is empty");
  if (n < minimum) throw std::invalid_argument("sample is too small");
}

void require_t(std::span<const double> t) {
  for (double x : t) {
    if (!(x >= 0.0)) throw std::invalid_argument("Laplace arguments must be nonnegative");
  }
}

// exp(-sum_j t_j x_j), skipping coordinates with t_j = 0.
double joint_kernel(std::span<const double> t, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (t[j] == 0.0) continue;
    if (std::isinf(x[j])) return 0.0;
    s += t[j] * x[j];
  }
  return std::exp(-s);
}

double sample_sd(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<double> SampleMatrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

double laplace_kernel(double t, double x) noexcept {
  if (t == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return std::exp(-t * x);
}

MeanEstimate mean_estimate(std::span<const double> values) {
  require_rows(values.size(), 1);
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  return {mean, sample_sd(values, mean) / std::sqrt(static_cast<double>(values.size())),
          values.size()};
}

LtEstimate empirical_lt(std::span<const double> samples, std::span<const double> t_grid) {
  require_rows(samples.size(), 2);
  require_t(t_grid);
  LtEstimate out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.n = samples.size();
  std::vector<double> k(samples.size());
  for (double t : t_grid) {
    for (std::size_t i = 0; i < samples.size(); ++i) k[i] = laplace_kernel(t, samples[i]);
    const auto m = mean_estimate(k);
    out.estimates.push_back(m.estimate);
    out.std_errors.push_back(m.std_error);
  }
  return out;
}

void write_lt_csv(std::ostream& os, const LtEstimate& lt) {
  os << "t,estimate,std_error,n\n";
  for (std::size_t i = 0; i < lt.t_grid.size(); ++i) {
    os << format_double(lt.t_grid[i]) << ',' << format_double(lt.estimates[i]) << ','
       << format_double(lt.std_errors[i]) << ',' << lt.n << '\n';
  }
}

MeanEstimate empirical_joint_lt_estimate(const SampleMatrix& samples, std::span<const double> t) {
  require_rows(samples.rows(), 1);
  if (t.size() != samples.cols()) throw std::invalid_argument("t vector and sample dimension differ");
  require_t(t);
  std::vector<double> k(samples.rows());
  for (std::size_t i = 0; i < samples.rows(); ++i) k[i] = joint_kernel(t, samples.row(i));
  return mean_estimate(k);
}

double empirical_joint_lt(const SampleMatrix& samples, std::span<const double> t) {
  return empirical_joint_lt_estimate(samples, t).estimate;
}

GapEstimate factorization_gap_estimate(const SampleMatrix& samples, std::span<const double> t) {
  if (samples.cols() < 2) throw std::invalid_argument("factorization gap needs k >= 2");
  const auto joint = empirical_joint_lt_estimate(samples, t);
  const std::size_t n = samples.rows();
  const std::size_t k = samples.cols();

  std::vector<double> marginal(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += laplace_kernel(t[j], samples(i, j));
    marginal[j] = s / static_cast<double>(n);
  }
  double product = 1.0;
  for (double m : marginal) product *= m;

  // Influence of each row on joint - prod(marginals).
  std::vector<double> psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = joint_kernel(t, samples.row(i));
    for (std::size_t j = 0; j < k; ++j) {
      double others = 1.0;
      for (std::size_t l = 0; l < k; ++l) {
        if (l != j) others *= marginal[l];
      }
      v -= others * laplace_kernel(t[j], samples(i, j));
    }
    psi[i] = v;
  }
  const auto spread = mean_estimate(psi);
  return {std::fabs(joint.estimate - product), spread.std_error, joint.estimate, product};
}

double factorization_gap(const SampleMatrix& samples, std::span<const double> t) {
  return factorization_gap_estimate(samples, t).gap;
}

KsResult ks_distance(std::span<const double> samples,
                     const std::function<double(double)>& reference_cdf) {
  require_rows(samples.size(), 1);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = reference_cdf(sorted[i]);
    const double above = std::fabs(static_cast<double>(i + 1) / n - f);
    const double below = std::fabs(f - static_cast<double>(i) / n);
    d = std::max({d, above, below});
  }
  return {d, sorted.size(), 1.628 / std::sqrt(n)};
}

MeanCov sample_mean_cov(const SampleMatrix& samples) {
  const std::size_t n = samples.rows();
  if (n < 2) throw std::invalid_argument("covariance needs at least two samples");
  const std::size_t k = samples.cols();
  MeanCov out;
  out.dim = k;
  out.mean.assign(k, 0.0);
  out.cov.assign(k * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) out.mean[j] += samples(i, j);
  }
  for (auto& m : out.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      const double da = samples(i, a) - out.mean[a];
      for (std::size_t b = 0; b < k; ++b) out.cov[a * k + b] += da * (samples(i, b) - out.mean[b]);
    }
  }
  for (auto& c : out.cov) c /= static_cast<double>(n - 1);
  return out;
}

double covariance_std_error(const SampleMatrix& samples, std::size_t i, std::size_t j) {
  const auto mc = sample_mean_cov(samples);
  std::vector<double> products(samples.rows());
  for (std::size_t r = 0; r < samples.rows(); ++r) {
    products[r] = (samples(r, i) - mc.mean[i]) * (samples(r, j) - mc.mean[j]);
  }
  return mean_estimate(products).std_error;
}

}  // namespace shotnoise
