#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace shotnoise {

/// Row-major n x k matrix of sample vectors.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  [[nodiscard]] std::vector<double> column(std::size_t j) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// e^{-t x} with e^{-t*inf} = 0 for t > 0 and 1 at t = 0.
[[nodiscard]] double laplace_kernel(double t, double x) noexcept;

/// Mean and standard error of a sample mean.
struct MeanEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

[[nodiscard]] MeanEstimate mean_estimate(std::span<const double> values);

struct LtEstimate {
  std::vector<double> t_grid;
  std::vector<double> estimates;
  std::vector<double> std_errors;
  std::size_t n = 0;
};

/// Empirical Laplace transform on a grid; needs at least two samples.
[[nodiscard]] LtEstimate empirical_lt(std::span<const double> samples,
                                      std::span<const double> t_grid);

/// Header `t,estimate,std_error,n`.
void write_lt_csv(std::ostream& os, const LtEstimate& lt);

/// (1/n) sum_i exp(-sum_j t_j X_ij).
[[nodiscard]] double empirical_joint_lt(const SampleMatrix& samples, std::span<const double> t);
[[nodiscard]] MeanEstimate empirical_joint_lt_estimate(const SampleMatrix& samples,
                                                       std::span<const double> t);

struct GapEstimate {
  double gap = 0.0;
  double std_error = 0.0;  // delta-method SE of (joint - product of marginals)
  double joint = 0.0;
  double marginal_product = 0.0;
};

/// |joint LT - product of marginal LTs| at t; needs k >= 2.
[[nodiscard]] double factorization_gap(const SampleMatrix& samples, std::span<const double> t);
[[nodiscard]] GapEstimate factorization_gap_estimate(const SampleMatrix& samples,
                                                     std::span<const double> t);

struct KsResult {
  double statistic = 0.0;
  std::size_t n = 0;
  double critical_1pct = 0.0;
};

/// One-sample Kolmogorov-Smirnov distance; critical value 1.628 / sqrt(n).
[[nodiscard]] KsResult ks_distance(std::span<const double> samples,
                                   const std::function<double(double)>& reference_cdf);

struct MeanCov {
  std::vector<double> mean;
  std::vector<double> cov;  // row-major k x k, unbiased
  std::size_t dim = 0;
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return cov[i * dim + j]; }
};

[[nodiscard]] MeanCov sample_mean_cov(const SampleMatrix& samples);

/// Standard error of the (i, j) sample covariance from the spread of centred products.
[[nodiscard]] double covariance_std_error(const SampleMatrix& samples, std::size_t i, std::size_t j);

}  // namespace shotnoise
