#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shotnoise {

/// Worker count from SHOTNOISE_WORKERS, else the hardware concurrency.
[[nodiscard]] std::size_t default_worker_count();

/// Evaluate fn(i) for i in [0, n) on `workers` threads (0 = default).
///
/// Results are returned by index, so any reduction over them in index order
/// is independent of the worker count.
template <class T, class Fn>
std::vector<T> replicate(std::size_t n, Fn&& fn, std::size_t workers = 0) {
  std::vector<T> results(n);
  if (workers == 0) workers = default_worker_count();
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace shotnoise
