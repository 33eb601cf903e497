#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace reslab {

/// Worker count used when a caller passes 0.
inline unsigned default_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Runs fn(begin, end) over [0, count) split into contiguous chunks, one
/// chunk per worker. The chunk boundaries depend only on count and workers.
/// The first exception thrown by any chunk is rethrown after all join.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1 || count < 2) {
    fn(std::size_t{0}, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Pairwise sum of a range with a fixed reduction tree: leaves of kBlock
/// elements summed left to right, then combined as a balanced binary tree.
/// The result is independent of how the caller parallelized producing the
/// inputs.
template <typename T>
T pairwise_sum(const T* data, std::size_t count) {
  constexpr std::size_t kBlock = 256;
  if (count <= kBlock) {
    T acc{};
    for (std::size_t i = 0; i < count; ++i) acc += data[i];
    return acc;
  }
  std::size_t half = (count / 2 + kBlock - 1) / kBlock * kBlock;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

}  // namespace reslab
