#pragma once

// Deterministic data parallelism. Work is always cut into chunks whose
// boundaries depend only on the problem size, never on the thread count, and
// partial results are combined in chunk order. Outputs are therefore
// bit-identical for any number of threads.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace pstrident {

struct Exec {
  unsigned threads = 1;
};

/// Runs body(i) for i in [0, count). Each index is visited exactly once; the
/// assignment of indices to threads is static and irrelevant to the result as
/// long as body(i) writes only to slot i.
template <class Body>
void parallel_for(std::size_t count, const Exec& exec, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, exec.threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Pairwise (cascade) summation with a fixed recursion tree.
template <class T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    T acc{};
    for (const auto& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(std::span<const T>(values));
}

/// Chunk size used by all chunked reductions in the library.
inline constexpr std::size_t kReductionChunk = 4096;

/// Sums f(i) for i in [0, count) through fixed chunks reduced pairwise.
template <class T, class F>
T chunked_sum(std::size_t count, const Exec& exec, F&& f) {
  const std::size_t chunks = (count + kReductionChunk - 1) / kReductionChunk;
  std::vector<T> partial(chunks);
  parallel_for(chunks, exec, [&](std::size_t c) {
    const std::size_t lo = c * kReductionChunk;
    const std::size_t hi = std::min(count, lo + kReductionChunk);
    std::vector<T> local(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) local[i - lo] = f(i);
    partial[c] = pairwise_sum(std::span<const T>(local));
  });
  return pairwise_sum(std::span<const T>(partial));
}

}  // namespace pstrident
