#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bpl {

/// Worker count: BPL_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_budget();

/// Runs fn(i) for i in [0, n) on up to thread_budget() threads. Each index
/// writes its own slot, so results are deterministic regardless of
/// scheduling. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace bpl
