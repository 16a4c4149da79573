#pragma once

#include <cstddef>
#include <functional>

namespace yamabe {

/// Worker count: hardware concurrency, capped by YAMABE_THREADS when set to a
/// positive integer. Always at least 1.
unsigned worker_count();

/**
 * Calls body(i) for every i in [0, count). Indices are split over
 * worker_count() threads; callers write results by index, so the output does
 * not depend on scheduling. The exception thrown for the smallest failing
 * index is rethrown after all workers finish.
 */
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace yamabe
