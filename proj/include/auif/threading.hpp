#pragma once

#include <cstddef>
#include <functional>

namespace auif {

/// Worker cap honoring the AUIF_THREADS environment variable
/// (defaults to std::thread::hardware_concurrency).
int worker_count();

/// Runs fn(i) for i in [0, total) over a static partition of contiguous
/// chunks. Each index is computed by exactly one worker with a fixed
/// accumulation order, so results are bit-identical for any worker count.
void parallel_for(size_t total, const std::function<void(size_t begin, size_t end)>& fn);

}  // namespace auif
