#pragma once

#include <cstddef>
#include <functional>

namespace dephaseprobe {

/// Worker count from DEPHASEPROBE_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Indices are
/// handed out in fixed contiguous blocks, so any per-index output is
/// schedule-independent. The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dephaseprobe
