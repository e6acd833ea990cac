#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace shotnoise {

/// SplitMix64 finalizer; used to decorrelate (seed, substream) pairs.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derive an independent seed for a named sub-task of a run.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) noexcept;

/// Deterministic random stream identified by (seed, substream).
///
/// Identical (seed, substream) pairs produce identical draw sequences. All
/// variate transforms are implemented here rather than through
/// <random> distributions so the sequence does not depend on the standard
/// library in use.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t substream = 0);

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t substream() const noexcept { return substream_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }
  /// Unit-mean exponential.
  double exponential();
  /// Standard normal (Box-Muller, no caching).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t substream_;
  std::mt19937_64 engine_;
};

}  // namespace shotnoise
