#pragma once

#include <cstddef>
#include <functional>

namespace kgrs {

// Number of worker threads. Defaults to the hardware concurrency (capped at 8)
// and can be limited with the KGRS_THREADS environment variable.
int worker_count();

// Runs body(i) for i in [0, n). Iterations must be independent; each writes
// its own output slot, so results do not depend on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kgrs
