#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace infoverload::detail {

/// Runs f(k) for k in [0, n) over contiguous chunks, one per hardware thread.
/// Results must be written by index. If any call throws, the exception from
/// the lowest failing index is rethrown, so failures are reported the same
/// way regardless of thread count.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, std::max<std::size_t>(1, n / 64));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) f(k);
    return;
  }

  struct Failure {
    std::size_t index = static_cast<std::size_t>(-1);
    std::exception_ptr error;
  };
  std::vector<Failure> failures(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      for (std::size_t k = begin; k < end; ++k) {
        try {
          f(k);
        } catch (...) {
          failures[w] = {k, std::current_exception()};
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& failure : failures) {
    if (failure.error) std::rethrow_exception(failure.error);
  }
}

}  // namespace infoverload::detail
