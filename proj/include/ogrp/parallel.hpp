#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ogrp {

/// Worker count for sweep parallelism: OGRP_THREADS when set (minimum 1),
/// otherwise the hardware concurrency.
inline unsigned sweep_thread_count() {
  if (const char* env = std::getenv("OGRP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(i) for i in [0, count) across sweep_thread_count() threads.
/// Callers index into pre-sized output slots, so aggregation order does not
/// depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned threads = sweep_thread_count();
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t begin = 0;
  for (unsigned t = 0; t < threads && begin < count; ++t) {
    const std::size_t remaining_threads = threads - t;
    const std::size_t chunk = (count - begin + remaining_threads - 1) / remaining_threads;
    pool.emplace_back([&fn, begin, end = begin + chunk] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
    begin += chunk;
  }
  for (auto& th : pool) th.join();
}

}  // namespace ogrp
