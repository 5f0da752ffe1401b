#pragma once

#include <cstddef>
#include <functional>

namespace affdim {

// Worker cap: min(hardware_concurrency, AFFDIM_THREADS if set). At least 1.
int thread_count();

// Runs fn(begin, end) over disjoint blocks of [0, n). Caller guarantees the
// result is independent of the partitioning (counter-addressed draws, or a
// reduction combined in index order by the caller).
void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace affdim
