#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace procast {

inline unsigned effective_workers(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(i) for i in [0, n). Work is split into contiguous blocks, one per
/// worker; callers make the output schedule-independent by writing into
/// per-index slots. The first exception is rethrown after all threads join.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& fn) {
  unsigned w = effective_workers(workers);
  if (n == 0) return;
  if (w <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (static_cast<std::size_t>(w) > n) w = static_cast<unsigned>(n);

  std::vector<std::thread> threads;
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const std::size_t chunk = (n + w - 1) / w;
  for (unsigned t = 0; t < w; ++t) {
    const std::size_t begin = static_cast<std::size_t>(t) * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace procast
