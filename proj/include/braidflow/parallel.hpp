#pragma once
// Deterministic chunked parallel loop. Work is split into fixed contiguous
// ranges so per-chunk results (and any reduction over them, done in chunk
// order) never depend on the worker count.

#include <thread>
#include <vector>

namespace braidflow {

template <class Fn>
inline void parallel_chunks(long n, int threads, Fn fn) {
  if (threads < 1) threads = 1;
  if (threads == 1 || n < 2) {
    fn(0L, n, 0);
    return;
  }
  const int workers = static_cast<int>(std::min<long>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long lo = w * chunk;
    const long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([=] { fn(lo, hi, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace braidflow
