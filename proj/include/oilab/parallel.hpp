#pragma once

// Deterministic chunked parallelism: work splits into fixed-size chunks
// whose results are keyed by chunk index, so merges happen in index order
// regardless of which worker ran which chunk.

#include <cstddef>
#include <functional>

namespace oilab {

std::size_t thread_count();
void set_thread_count(std::size_t n);

// Invokes fn(chunk_index, begin, end) for consecutive chunks of [0, total).
void parallel_chunks(std::size_t total, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Static contiguous split of [0, total) over the active worker count;
// fn(worker_index, begin, end). Partition depends only on the thread-count
// setting, so per-worker accumulations merge reproducibly.
void parallel_ranges(std::size_t total,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

std::size_t parallel_range_workers(std::size_t total);

} // namespace oilab
