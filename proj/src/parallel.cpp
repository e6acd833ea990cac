#include "shotnoise/parallel.hpp"

#include <cstdlib>
#include <string>

namespace shotnoise {

std::size_t default_worker_count() {
  if (const char* env = std::getenv("SHOTNOISE_WORKERS"); env != nullptr && *env != '\0') {
    try {
      const auto n = std::stoul(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  const auto hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace shotnoise
