#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace kmg {

inline std::size_t chunk_count(std::size_t n, int threads, std::size_t min_parallel = 8192) {
  return threads <= 1 || n < min_parallel ? 1 : std::min<std::size_t>(static_cast<std::size_t>(threads), n);
}

/// Runs fn(begin, end, chunk) over [0, n) split into contiguous chunks, one
/// per worker. Falls back to a single inline call for small n or one thread.
/// Chunk boundaries depend only on (n, threads), so chunked reductions merged
/// in chunk order are deterministic. The first exception thrown by any chunk
/// is rethrown on the calling thread.
template <class Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn, std::size_t min_parallel = 8192) {
  const std::size_t workers = chunk_count(n, threads, min_parallel);
  if (workers == 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  const std::size_t step = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
      const std::size_t b = std::min(n, w * step);
      const std::size_t e = std::min(n, b + step);
      pool.emplace_back([&fn, &errors, b, e, w] {
        try {
          fn(b, e, w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    try {
      fn(std::size_t{0}, std::min(n, step), std::size_t{0});
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace kmg
