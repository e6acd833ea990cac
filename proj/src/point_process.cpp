#include "shotnoise/point_process.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "shotnoise/format.hpp"

namespace shotnoise {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_dim(std::size_t d) {
  if (d == 0) throw std::invalid_argument("window dimension must be at least 1");
}

// log(k!) from a table for small k and a Stirling series otherwise. Avoids
// std::lgamma, which writes the global signgam on glibc.
double log_factorial(double k) {
  static const auto table = [] {
    std::array<double, 64> t{};
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  if (k < static_cast<double>(table.size())) return table[static_cast<std::size_t>(k)];
  const double x = k + 1.0;
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

std::uint64_t poisson_inversion(double mean, RngStream& rng) {
  const double threshold = std::exp(-mean);
  std::uint64_t k = 0;
  double prod = rng.uniform();
  while (prod > threshold) {
    ++k;
    prod *= rng.uniform();
  }
  return k;
}

// Hormann's transformed rejection with squeeze (PTRS).
std::uint64_t poisson_ptrs(double mean, RngStream& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - log_factorial(k)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace

Window Window::ball(std::vector<double> center, double radius) {
  require_dim(center.size());
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball radius must be positive and finite");
  }
  return Window(Ball{std::move(center), radius});
}

Window Window::box(std::vector<double> lo, std::vector<double> hi) {
  require_dim(lo.size());
  if (lo.size() != hi.size()) throw std::invalid_argument("box corners differ in dimension");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw std::invalid_argument("box requires lo < hi componentwise");
  }
  return Window(Box{std::move(lo), std::move(hi)});
}

std::size_t Window::dim() const noexcept {
  return std::visit(overloaded{[](const Ball& b) { return b.center.size(); },
                               [](const Box& b) { return b.lo.size(); }},
                    shape_);
}

bool Window::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  return std::visit(
      overloaded{[&](const Ball& b) {
                   double r2 = 0.0;
                   for (std::size_t i = 0; i < x.size(); ++i) {
                     const double dx = x[i] - b.center[i];
                     r2 += dx * dx;
                   }
                   return r2 <= b.radius * b.radius * (1.0 + 1e-12);
                 },
                 [&](const Box& b) {
                   for (std::size_t i = 0; i < x.size(); ++i) {
                     if (x[i] < b.lo[i] || x[i] > b.hi[i]) return false;
                   }
                   return true;
                 }},
      shape_);
}

double unit_ball_volume(std::size_t d) {
  require_dim(d);
  const double half = 0.5 * static_cast<double>(d);
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double window_measure(const Window& w) {
  if (w.is_ball()) {
    const auto& b = w.as_ball();
    return unit_ball_volume(b.center.size()) *
           std::pow(b.radius, static_cast<double>(b.center.size()));
  }
  const auto& b = w.as_box();
  double v = 1.0;
  for (std::size_t i = 0; i < b.lo.size(); ++i) v *= b.hi[i] - b.lo[i];
  return v;
}

void validate(const MarkDistribution& dist) {
  std::visit(overloaded{[](const Deterministic& m) {
                          if (!(m.value > 0.0) || !std::isfinite(m.value))
                            throw std::invalid_argument("deterministic mark must be positive");
                        },
                        [](const Exponential& m) {
                          if (!(m.mean > 0.0) || !std::isfinite(m.mean))
                            throw std::invalid_argument("exponential mean must be positive");
                        },
                        [](const Pareto& m) {
                          if (!(m.scale > 0.0) || !std::isfinite(m.scale))
                            throw std::invalid_argument("pareto scale must be positive");
                          if (!(m.shape > 1.0) || !std::isfinite(m.shape))
                            throw std::invalid_argument(
                                "pareto shape must exceed 1 (finite mean mark)");
                        }},
             dist);
}

double mark_mean(const MarkDistribution& dist) {
  return std::visit(overloaded{[](const Deterministic& m) { return m.value; },
                               [](const Exponential& m) { return m.mean; },
                               [](const Pareto& m) { return m.shape * m.scale / (m.shape - 1.0); }},
                    dist);
}

double mark_survival(const MarkDistribution& dist, double x) {
  return std::visit(overloaded{[&](const Deterministic& m) { return m.value >= x ? 1.0 : 0.0; },
                               [&](const Exponential& m) {
                                 return x <= 0.0 ? 1.0 : std::exp(-x / m.mean);
                               },
                               [&](const Pareto& m) {
                                 return x <= m.scale ? 1.0 : std::pow(m.scale / x, m.shape);
                               }},
                    dist);
}

double sample_mark(const MarkDistribution& dist, RngStream& rng) {
  return std::visit(overloaded{[](const Deterministic& m) { return m.value; },
                               [&](const Exponential& m) { return m.mean * rng.exponential(); },
                               [&](const Pareto& m) {
                                 return m.scale * std::pow(rng.uniform_open(), -1.0 / m.shape);
                               }},
                    dist);
}

MarkedConfiguration::MarkedConfiguration(Window window, double intensity,
                                         std::vector<double> coords, std::vector<double> marks)
    : window_(std::move(window)),
      intensity_(intensity),
      coords_(std::move(coords)),
      marks_(std::move(marks)) {
  if (!(intensity_ >= 0.0)) throw std::invalid_argument("intensity must be nonnegative");
  if (coords_.size() != marks_.size() * window_.dim()) {
    throw std::invalid_argument("point and mark counts differ");
  }
  for (double m : marks_) {
    if (!(m > 0.0)) throw std::invalid_argument("marks must be strictly positive");
  }
}

std::uint64_t sample_poisson(double mean, RngStream& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson mean must be finite and nonnegative");
  }
  if (mean == 0.0) return 0;
  return mean < 10.0 ? poisson_inversion(mean, rng) : poisson_ptrs(mean, rng);
}

void sample_uniform(const Window& w, RngStream& rng, std::span<double> out) {
  const std::size_t d = w.dim();
  if (!w.is_ball()) {
    const auto& b = w.as_box();
    for (std::size_t i = 0; i < d; ++i) out[i] = b.lo[i] + (b.hi[i] - b.lo[i]) * rng.uniform();
    return;
  }
  const auto& b = w.as_ball();
  if (d == 1) {
    out[0] = b.center[0] + b.radius * (2.0 * rng.uniform() - 1.0);
    return;
  }
  if (d == 2) {
    const double r = b.radius * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    out[0] = b.center[0] + r * std::cos(theta);
    out[1] = b.center[1] + r * std::sin(theta);
    return;
  }
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      out[i] = rng.normal();
      norm2 += out[i] * out[i];
    }
  } while (norm2 == 0.0);
  const double r = b.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  const double scale = r / std::sqrt(norm2);
  for (std::size_t i = 0; i < d; ++i) out[i] = b.center[i] + scale * out[i];
}

MarkedConfiguration sample_ppp(const Window& w, double intensity, RngStream& rng) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
    throw std::invalid_argument("intensity must be nonnegative");
  }
  const std::size_t d = w.dim();
  const auto n = static_cast<std::size_t>(sample_poisson(intensity * window_measure(w), rng));
  std::vector<double> coords(n * d);
  for (std::size_t i = 0; i < n; ++i) sample_uniform(w, rng, {coords.data() + i * d, d});
  return {w, intensity, std::move(coords), std::vector<double>(n, 1.0)};
}

std::vector<double> sample_marks(std::size_t n, const MarkDistribution& dist, RngStream& rng) {
  validate(dist);
  std::vector<double> marks(n);
  for (auto& m : marks) m = sample_mark(dist, rng);
  return marks;
}

MarkedConfiguration sample_marked_ppp(const Window& w, double intensity,
                                      const MarkDistribution& dist, RngStream& rng) {
  validate(dist);
  auto locations = sample_ppp(w, intensity, rng);
  auto marks = sample_marks(locations.size(), dist, rng);
  return {w, intensity, locations.coords(), std::move(marks)};
}

void write_configuration_csv(std::ostream& os, const MarkedConfiguration& config) {
  const std::size_t d = config.dim();
  for (std::size_t j = 0; j < d; ++j) os << 'x' << (j + 1) << ',';
  os << "mark\n";
  for (std::size_t i = 0; i < config.size(); ++i) {
    for (double x : config.point(i)) os << format_double(x) << ',';
    os << format_double(config.mark(i)) << '\n';
  }
}

}  // namespace shotnoise
