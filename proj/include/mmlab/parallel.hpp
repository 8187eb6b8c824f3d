#pragma once

#include <cstddef>
#include <functional>

namespace mmlab {

// Worker count for data-parallel loops. Reads MMLAB_WORKERS once; values
// < 1 fall back to the hardware concurrency.
int worker_count();

// Runs f(i) for i in [0, n). Work is split into contiguous index blocks so
// that results written by index are deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace mmlab
