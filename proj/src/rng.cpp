#include "shotnoise/rng.hpp"

#include <cmath>
#include <numbers>

namespace shotnoise {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) noexcept {
  // FNV-1a over the tag, folded into the seed.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return mix64(mix64(seed) ^ h);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t substream)
    : seed_(seed),
      substream_(substream),
      engine_(mix64(mix64(seed) ^ mix64(substream * 0xD1B54A32D192ED03ULL + 1))) {}

double RngStream::exponential() { return -std::log(uniform_open()); }

double RngStream::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace shotnoise
