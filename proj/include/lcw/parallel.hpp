#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lcw {

inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results are
/// written by index, so the output never depends on the schedule. The first
/// exception (lowest index) is rethrown after all workers finish.
template <class Body> void parallel_for(std::size_t count, Body &&body, unsigned threads = 0) {
  if (threads == 0)
    threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::size_t first_index = count;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(err_mutex);
            if (i < first_index) {
              first_index = i;
              first_error = std::current_exception();
            }
          }
        }
      });
  }
  if (first_error)
    std::rethrow_exception(first_error);
}

/// Maps fn over [0, count) into a vector ordered by index.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn &&fn, unsigned threads = 0) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = fn(i); }, threads);
  return out;
}

} // namespace lcw
