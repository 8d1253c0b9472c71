#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace voidplace {

/// Runs fn(i) for i in [0, n) across up to `workers` threads with a static
/// block partition. Each call must write only to its own output slot(s);
/// combined with fixed-order reductions afterwards, results are identical
/// for any worker count. Exceptions from workers are rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  const int usable =
      std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (usable == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(usable));
  const std::size_t chunk = (n + usable - 1) / usable;
  for (int w = 0; w < usable; ++w) {
    const std::size_t begin = static_cast<std::size_t>(w) * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace voidplace
