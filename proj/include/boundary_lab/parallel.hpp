#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace boundary_lab {

// Splits [0, n) into fixed-size chunks and runs fn(begin, end, chunk) on up to
// `threads` workers. Chunk boundaries do not depend on the thread count, so
// callers that reduce per-chunk results in chunk order get identical output
// for any number of threads.
template <class Fn>
void for_each_chunk(std::size_t n, std::size_t chunk_size, int threads, Fn&& fn) {
  std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  auto run = [&](std::size_t worker, std::size_t stride) {
    for (std::size_t c = worker; c < chunks; c += stride) {
      fn(c * chunk_size, std::min(n, (c + 1) * chunk_size), c);
    }
  };
  std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, chunks));
  if (workers <= 1) {
    run(0, 1);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        run(w, workers);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

}  // namespace boundary_lab
