#pragma once

#include <cstddef>
#include <functional>

namespace levyext {

/// Worker count: LEVYEXT_THREADS if set, otherwise hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on a pool of threads. Work items are
/// independent; callers store results by index so reductions stay ordered.
/// The first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned workers = 0);

}  // namespace levyext
