#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace mtd {

inline int default_thread_count() {
  if (const char* env = std::getenv("MTD_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Static block partition of [begin, end); fn(block_begin, block_end, worker).
// Workers own disjoint ranges, so fn may write to per-worker buffers without
// locking; callers merge in worker order to keep results deterministic.
inline void parallel_blocks(int64_t begin, int64_t end,
                            const std::function<void(int64_t, int64_t, int)>& fn,
                            int threads = 0) {
  if (threads <= 0) threads = default_thread_count();
  int64_t total = end - begin;
  if (total <= 0) return;
  threads = static_cast<int>(std::min<int64_t>(threads, total));
  if (threads == 1) {
    fn(begin, end, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  int64_t chunk = (total + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    int64_t lo = begin + w * chunk;
    int64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi, w] { fn(lo, hi, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mtd
