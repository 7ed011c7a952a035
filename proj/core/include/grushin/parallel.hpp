#pragma once

#include <cstddef>
#include <functional>

namespace grushin {

/// Worker count: hardware concurrency, capped by the GC_THREADS environment
/// variable when it holds a positive integer.
unsigned worker_count();

/// Runs body(i) for i in [begin, end) on up to worker_count() threads, in
/// contiguous blocks. The body must only write to state owned by index i.
/// Calls made from inside a body run serially on the calling thread.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace grushin
