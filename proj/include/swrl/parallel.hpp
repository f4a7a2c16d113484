#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace swrl {

/// Worker count for Monte-Carlo loops: explicit override, else SWRL_THREADS,
/// else the hardware concurrency.
int worker_count();
void set_worker_count(int workers);  // <= 0 clears the override

namespace detail {
void run_blocks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& block);
}

/// Calls fn(i) for i in [0, count). Iterations are split into contiguous
/// blocks; callers write into per-index slots and reduce afterwards in index
/// order, which keeps results independent of the worker count.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  detail::run_blocks(count, [&fn](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
  });
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace swrl
