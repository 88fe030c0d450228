#pragma once

// Minimal work distribution over std::thread.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace flatkit {

/// FLATKIT_THREADS if set and positive, else the hardware concurrency.
int default_threads();

/// Resolves a requested count (<= 0 means default).
inline int resolve_threads(int requested) { return requested > 0 ? requested : default_threads(); }

/// Calls fn(i) for i in [0, n) on up to `threads` workers. Work items are
/// claimed dynamically; callers write results into per-index slots so the
/// outcome does not depend on the schedule. The first exception is
/// rethrown after all workers stop.
template <class F>
void parallel_for(int n, int threads, F&& fn) {
  threads = std::min(resolve_threads(threads), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace flatkit
