#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dpmbq {

// DPMBQ_THREADS caps the worker count; unset means hardware concurrency.
inline std::size_t worker_limit() {
  if (const char* env = std::getenv("DPMBQ_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<std::size_t>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

namespace detail {
inline bool& inside_parallel_region() {
  thread_local bool inside = false;
  return inside;
}
}  // namespace detail

// Runs fn(0), ..., fn(count-1) on a worker pool. Callers must write results
// to per-index slots; indices are handed out dynamically so the schedule is
// arbitrary, and correctness must not depend on it. Nested calls run inline
// on the calling thread. The first exception thrown by fn is rethrown after
// all workers finish.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  if (count == 0) return;
  std::size_t workers = std::min(worker_limit(), count);
  if (workers <= 1 || detail::inside_parallel_region()) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&] {
    detail::inside_parallel_region() = true;
    while (!abort.load(std::memory_order_relaxed)) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        abort.store(true, std::memory_order_relaxed);
      }
    }
    detail::inside_parallel_region() = false;
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dpmbq
