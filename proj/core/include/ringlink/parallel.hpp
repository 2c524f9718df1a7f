// SPDX-License-Identifier: Apache-2.0

#ifndef RINGLINK_PARALLEL_HPP
#define RINGLINK_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ringlink {

/// Evaluates fn(i) for i in [0, n) on up to `threads` workers and returns the
/// results in index order. Each index is written by exactly one worker, so
/// the output does not depend on scheduling. The first exception (lowest
/// worker index) is rethrown.
template <typename Fn>
auto parallel_map(std::size_t n, Fn&& fn, unsigned threads = 1) {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out(n);
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace ringlink

#endif  // RINGLINK_PARALLEL_HPP
