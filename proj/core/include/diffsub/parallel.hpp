#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace dsub::detail {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items are
/// handed out one at a time, so the result must not depend on which worker
/// runs an item. The first exception thrown by any item is rethrown.
template <class Fn>
void parallel_for(Eigen::Index count, unsigned threads, Fn&& fn) {
  if (count <= 0) return;
  const auto workers = static_cast<unsigned>(
      std::min<Eigen::Index>(std::max(1u, threads), count));
  if (workers == 1) {
    for (Eigen::Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<Eigen::Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const Eigen::Index i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace dsub::detail
