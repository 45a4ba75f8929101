#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace edgeshap::detail {

inline unsigned resolve_threads(unsigned requested, std::size_t tasks) {
  unsigned threads = requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
  if (tasks < threads) threads = static_cast<unsigned>(std::max<std::size_t>(tasks, 1));
  return threads;
}

/// Runs task(k) for every k in [0, count) on up to `threads` workers.
/// Tasks are claimed dynamically; callers write results into per-task slots
/// and reduce them in index order afterwards, so the outcome never depends
/// on the worker count. The first exception thrown by a task is rethrown.
template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  threads = resolve_threads(threads, count);
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        task(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace edgeshap::detail
