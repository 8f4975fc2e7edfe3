#ifndef RXCOORD_PARALLEL_HPP
#define RXCOORD_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

#include "rxcoord/text.hpp"

namespace rxcoord {

/// `requested` > 0 wins; otherwise RXCOORD_THREADS, otherwise the hardware count.
inline int resolve_threads(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RXCOORD_THREADS")) {
    if (auto v = to_int(env); v && *v > 0) return static_cast<int>(*v);
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers, each taking a
/// contiguous block. Callers write results into slot i, so output never
/// depends on scheduling. If several blocks throw, the exception from the
/// lowest block is rethrown.
template <class Fn>
void parallel_for(int threads, std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        for (std::size_t i = begin; i < end; ++i) {
          try {
            fn(i);
          } catch (...) {
            errors[w] = std::current_exception();
            return;
          }
        }
      });
    }
  }
  for (std::size_t w = 0; w < workers; ++w)
    if (errors[w]) std::rethrow_exception(errors[w]);
}

}  // namespace rxcoord

#endif  // RXCOORD_PARALLEL_HPP
