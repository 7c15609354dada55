#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gmulti {

// Worker cap: GMULTI_THREADS if set to a positive integer, otherwise all
// hardware threads (0 or unparsable falls back to the hardware count).
inline unsigned worker_count() {
  static const unsigned resolved = [] {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("GMULTI_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return hw;
  }();
  return resolved;
}

namespace detail {
inline bool& inside_worker() {
  thread_local bool inside = false;
  return inside;
}
}  // namespace detail

// Runs fn(0), ..., fn(n-1), possibly concurrently. Iterations must be
// independent; callers that reduce results do so positionally afterwards, so
// totals never depend on completion order. Nested calls run serially inside
// the calling worker. The first exception thrown is rethrown after the join.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const unsigned workers = worker_count();
  if (workers <= 1 || n == 1 || detail::inside_worker()) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(spawn);
  for (unsigned w = 0; w < spawn; ++w) {
    pool.emplace_back([&] {
      detail::inside_worker() = true;
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace gmulti
