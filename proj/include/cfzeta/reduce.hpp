#pragma once

#include <cstddef>
#include <vector>

#include "cfzeta/parallel.hpp"

namespace cfzeta {

/// Chunk size of the deterministic reduction. Fixed so that serial and
/// parallel runs sum in exactly the same tree shape.
inline constexpr std::size_t kReduceChunk = 1024;

namespace detail {

template <typename T, typename F>
T pairwise_range(std::size_t lo, std::size_t hi, const F& term) {
  if (hi - lo <= 8) {
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    return acc;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_range<T>(lo, mid, term) + pairwise_range<T>(mid, hi, term);
}

}  // namespace detail

/// Sum of term(i) over i in [0, n) with a fixed-shape pairwise tree:
/// 1024-element chunks summed pairwise, then a pairwise tree over the
/// chunk results. The tree shape depends only on n, never on the worker
/// count, so results are bit-identical for any ThreadPool.
template <typename T, typename F>
T deterministic_sum(std::size_t n, const F& term, ThreadPool* pool = nullptr) {
  if (n == 0) return T{};
  const std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
  std::vector<T> partial(nchunks);
  auto chunk_sum = [&](std::size_t c) {
    const std::size_t lo = c * kReduceChunk;
    const std::size_t hi = lo + kReduceChunk < n ? lo + kReduceChunk : n;
    partial[c] = detail::pairwise_range<T>(lo, hi, term);
  };
  if (pool != nullptr && pool->workers() > 1 && nchunks > 1) {
    pool->parallel_for(nchunks, chunk_sum);
  } else {
    for (std::size_t c = 0; c < nchunks; ++c) chunk_sum(c);
  }
  // Fold the chunk results pairwise, in chunk order.
  std::size_t m = nchunks;
  while (m > 1) {
    std::size_t h = 0;
    for (std::size_t i = 0; i + 1 < m; i += 2) partial[h++] = partial[i] + partial[i + 1];
    if (m & 1) partial[h++] = partial[m - 1];
    m = h;
  }
  return partial[0];
}

}  // namespace cfzeta
