#pragma once

#include <cstddef>
#include <functional>

namespace ricb {

// Worker cap from RICB_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

// Runs fn(i) for i in [0, n) over contiguous blocks, one block per worker.
// If any call throws, the exception from the lowest failing index is
// rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t workers = worker_count());

}  // namespace ricb
