#pragma once

#include <cstddef>
#include <functional>

namespace rotdev {

/// Worker count used by the grid kernels. Defaults to RD_THREADS when set,
/// else the hardware concurrency.
int worker_count();
void set_worker_count(int n);

/// Calls body(begin, end, worker) on contiguous chunks of [0, n). Chunk
/// boundaries depend only on n and the worker count; callers write into
/// per-index slots so results do not depend on scheduling.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t, int)>& body);

} // namespace rotdev
