#pragma once

#include <cstddef>
#include <functional>

namespace dfb {

/// Worker count: $DFB_WORKERS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to `workers` threads. Each index runs
/// exactly once; callers write results into per-index slots, so the outcome
/// does not depend on scheduling. The first exception thrown is rethrown after
/// all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t workers = 0);

} // namespace dfb
