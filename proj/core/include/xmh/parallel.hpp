#pragma once

#include <cstddef>
#include <functional>

namespace xmh {

/// Worker count: XMHASH_THREADS when set (clamped to [1, 256]), otherwise
/// std::thread::hardware_concurrency().
unsigned thread_count();

/// Runs fn over [0, n) in contiguous chunks, one per worker. Each index must
/// write only its own output slot; chunking never changes results.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace xmh
