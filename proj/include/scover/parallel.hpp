#pragma once

// Deterministic parallel-for: work items are indexed, workers take disjoint
// index ranges, and callers store results by index. Output never depends on
// the thread count.

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scover {

template <typename Fn>
void parallel_for(size_t count, int threads, Fn&& fn) {
  if (threads < 1) threads = 1;
  if (threads == 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  size_t workers = std::min<size_t>(static_cast<size_t>(threads), count);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace scover
