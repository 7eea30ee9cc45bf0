#pragma once

#include <cstddef>
#include <functional>

namespace pulseorigin {

/// Global worker count for parallel maps. 0 means hardware concurrency.
/// Reductions are always performed in fixed index order, so results do not
/// depend on the worker count.
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n). Work items must be independent; each writes
/// to its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace pulseorigin
