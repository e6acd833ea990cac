#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "shotnoise/rng.hpp"

namespace shotnoise {

struct Ball {
  std::vector<double> center;
  double radius = 1.0;
};

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Simulation window: a Euclidean ball or an axis-aligned box in R^d.
class Window {
 public:
  static Window ball(std::vector<double> center, double radius);
  static Window box(std::vector<double> lo, std::vector<double> hi);

  [[nodiscard]] std::size_t dim() const noexcept;
  [[nodiscard]] bool is_ball() const noexcept { return std::holds_alternative<Ball>(shape_); }
  [[nodiscard]] const Ball& as_ball() const { return std::get<Ball>(shape_); }
  [[nodiscard]] const Box& as_box() const { return std::get<Box>(shape_); }
  /// Closed-set membership test with a small relative slack for round-off.
  [[nodiscard]] bool contains(std::span<const double> x) const;

 private:
  explicit Window(std::variant<Ball, Box> shape) : shape_(std::move(shape)) {}
  std::variant<Ball, Box> shape_;
};

/// Volume of the unit ball in R^d.
[[nodiscard]] double unit_ball_volume(std::size_t d);
/// Lebesgue measure of the window.
[[nodiscard]] double window_measure(const Window& w);

// Mark laws. All have finite mean; Pareto requires shape > 1.
struct Deterministic {
  double value = 1.0;
};
struct Exponential {
  double mean = 1.0;
};
struct Pareto {
  double scale = 1.0;
  double shape = 3.0;
};
using MarkDistribution = std::variant<Deterministic, Exponential, Pareto>;

/// Throws std::invalid_argument when parameters are out of range.
void validate(const MarkDistribution& dist);
[[nodiscard]] double mark_mean(const MarkDistribution& dist);
/// P(p >= x).
[[nodiscard]] double mark_survival(const MarkDistribution& dist, double x);
[[nodiscard]] double sample_mark(const MarkDistribution& dist, RngStream& rng);

/// Finite realization of an independently marked PPP.
///
/// Points are stored row-major in a flat buffer of size() * dim() doubles.
class MarkedConfiguration {
 public:
  MarkedConfiguration(Window window, double intensity, std::vector<double> coords,
                      std::vector<double> marks);

  [[nodiscard]] std::size_t size() const noexcept { return marks_.size(); }
  [[nodiscard]] bool empty() const noexcept { return marks_.empty(); }
  [[nodiscard]] std::size_t dim() const noexcept { return window_.dim(); }
  [[nodiscard]] std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim(), dim()};
  }
  [[nodiscard]] double mark(std::size_t i) const { return marks_[i]; }
  [[nodiscard]] const std::vector<double>& coords() const noexcept { return coords_; }
  [[nodiscard]] const std::vector<double>& marks() const noexcept { return marks_; }
  [[nodiscard]] const Window& window() const noexcept { return window_; }
  [[nodiscard]] double intensity() const noexcept { return intensity_; }

 private:
  Window window_;
  double intensity_;
  std::vector<double> coords_;
  std::vector<double> marks_;
};

/// Poisson(mean) count: inversion below mean 10, PTRS rejection above.
[[nodiscard]] std::uint64_t sample_poisson(double mean, RngStream& rng);

/// One uniform point of the window written into `out` (size dim()).
void sample_uniform(const Window& w, RngStream& rng, std::span<double> out);

/// Homogeneous PPP on `w`; every mark is 1.
[[nodiscard]] MarkedConfiguration sample_ppp(const Window& w, double intensity, RngStream& rng);

[[nodiscard]] std::vector<double> sample_marks(std::size_t n, const MarkDistribution& dist,
                                               RngStream& rng);

[[nodiscard]] MarkedConfiguration sample_marked_ppp(const Window& w, double intensity,
                                                    const MarkDistribution& dist, RngStream& rng);

/// Debug dump: header `x1,...,xd,mark`, one row per point.
void write_configuration_csv(std::ostream& os, const MarkedConfiguration& config);

}  // namespace shotnoise
