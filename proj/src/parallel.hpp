#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace pqvrf {

// Runs fn(i) for i in [0, n) on up to `threads` workers, strided.
template <typename Fn>
void parallel_for(std::uint32_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, n));
  if (threads == 1) {
    for (std::uint32_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::uint32_t i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace pqvrf
