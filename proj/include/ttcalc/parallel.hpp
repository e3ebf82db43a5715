#pragma once

#include <cstddef>
#include <functional>

namespace ttcalc {

/// Worker count: TTCALC_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/**
 * Runs body(begin, end, worker) over contiguous chunks of [0, n). Results
 * must be written to disjoint, pre-sized slots so output order does not
 * depend on scheduling. The first exception thrown by a worker is rethrown.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 256);

}  // namespace ttcalc
