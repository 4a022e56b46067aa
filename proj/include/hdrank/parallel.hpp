#pragma once

#include <cstddef>
#include <functional>

namespace hdrank {

// requested <= 0 selects the hardware concurrency (at least 1).
int resolve_threads(int requested) noexcept;

// Runs fn(begin, end) over contiguous chunks of [0, count).  Chunk
// boundaries depend only on (count, threads); callers that write
// per-index outputs therefore produce identical results for every
// thread count.
void parallel_chunks(std::size_t count, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace hdrank
