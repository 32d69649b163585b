#pragma once

#include <cstddef>
#include <functional>

namespace chainwave {

/// Worker count: CHAINWAVE_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) over contiguous chunks on worker_count() threads.
/// body must only write to state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace chainwave
