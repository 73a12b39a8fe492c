#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace hhs::detail {

/// Runs `sweep(begin, end)` over contiguous chunks of [0, count) on a small
/// worker pool, then folds the chunk results in chunk order with
/// `merge(accumulator, chunk_result)`. Folding in order keeps the outcome
/// identical to a serial sweep as long as `merge` only replaces on strict
/// improvement. `workers` = 0 uses the hardware concurrency.
template <class Result, class Sweep, class Merge>
Result ordered_parallel_reduce(std::size_t count, Result init, Sweep sweep, Merge merge, std::size_t workers = 0) {
  if (count == 0) return init;
  if (workers == 0) workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers == 1) {
    merge(init, sweep(std::size_t{0}, count));
    return init;
  }
  const std::size_t chunks = std::min(count, workers * 8);
  std::vector<Result> partial(chunks, init);
  std::atomic<std::size_t> next{0};
  auto bounds = [&](std::size_t chunk) {
    return std::pair{chunk * count / chunks, (chunk + 1) * count / chunks};
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t chunk = next++; chunk < chunks; chunk = next++) {
          auto [begin, end] = bounds(chunk);
          partial[chunk] = sweep(begin, end);
        }
      });
    }
  }
  for (auto& result : partial) merge(init, result);
  return init;
}

}  // namespace hhs::detail
