#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace manikde {

// Worker count: MANIKDE_THREADS env var if set, else hardware concurrency,
// with a floor of 1 so single-core hosts degrade to the serial path.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("MANIKDE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc >= 1 ? hc : 1;
}

// Block-partitioned parallel loop. body(i) must write only to slot i of
// caller-owned storage; reductions happen serially afterwards so results
// are identical for every thread count.
template <class Body>
void parallel_for(std::size_t count, Body&& body, unsigned threads = 0) {
  if (threads == 0) threads = default_thread_count();
  if (count == 0) return;
  if (threads > count) threads = static_cast<unsigned>(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = count * t / threads;
    const std::size_t hi = count * (t + 1) / threads;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace manikde
