#pragma once

#include <cstddef>
#include <functional>

namespace dpkit {

/// Upper bound on worker threads used by element loops. Initialised from DPKIT_THREADS, default 1.
int max_threads();
void set_max_threads(int threads);

/// Fixed chunk length for element loops. Partial results are combined in chunk order, so
/// reductions are bitwise identical for every thread count.
inline constexpr std::size_t kChunkSize = 512;

inline std::size_t chunk_count(std::size_t items) { return (items + kChunkSize - 1) / kChunkSize; }

/// Runs body(chunk, begin, end) for every chunk of [0, items). Chunks are distributed over at
/// most max_threads() workers; small ranges run inline.
void for_each_chunk(std::size_t items,
                    const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>& body);

}  // namespace dpkit
