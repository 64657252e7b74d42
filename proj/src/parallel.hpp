#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace repnet::detail {

/// Runs body(begin, end) over contiguous chunks of [0, n) on up to `threads`
/// workers. threads <= 1 runs inline.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body body) {
  if (threads <= 1 || n < 2) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

}  // namespace repnet::detail
