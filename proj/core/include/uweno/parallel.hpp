#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace uweno {

inline int resolve_threads(int n_threads) {
  if (n_threads > 0) return n_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Static-partition parallel loop: thread t handles [t*n/nt, (t+1)*n/nt).
/// The partition depends only on n and nt, and bodies write disjoint ranges,
/// so results are bitwise independent of the thread count.
inline void parallel_for(int n, int n_threads, const std::function<void(int, int)>& body) {
  const int nt = std::min(resolve_threads(n_threads), n > 0 ? n : 1);
  if (nt <= 1 || n <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    const int lo = static_cast<int>(static_cast<long>(n) * t / nt);
    const int hi = static_cast<int>(static_cast<long>(n) * (t + 1) / nt);
    pool.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace uweno
