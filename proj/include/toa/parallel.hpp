#pragma once

#include <cstddef>
#include <functional>

namespace toa {

/// Worker count: TOA_THREADS if set and positive, otherwise the hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Each index is executed exactly once; the first
/// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace toa
