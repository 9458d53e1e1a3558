#pragma once

#include <cstddef>
#include <functional>

namespace gsig {

/// Caps the number of worker threads used by parallel kernels.
/// 0 restores the hardware default.
void set_max_threads(std::size_t n);
std::size_t max_threads();

/// Runs fn(begin, end) over disjoint chunks of [0, count).
/// Chunk boundaries depend only on (count, chunk_size), never on the thread
/// count, so results that are assembled per-chunk are identical whether the
/// chunks run sequentially or in parallel.
void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace gsig
