#pragma once

#include <cstddef>
#include <functional>

namespace oschalf {

/// Worker cap: OSCHALF_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int worker_count();

/// Calls task(i) for i in [0, n) on up to worker_count() threads. Callers
/// store results by index, so output order never depends on scheduling.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace oschalf
