// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace subseg {

// Clamp a requested worker count to something usable (minimum 1).
int resolve_threads(int requested);

// Runs fn(chunk, begin, end) over [0, n) split into contiguous chunks, one per
// worker. Callers keep per-chunk state and merge it in chunk order, so results
// are identical to a single-threaded run as long as the merge is associative.
void parallel_chunks(size_t n, int threads,
                     const std::function<void(size_t chunk, size_t begin, size_t end)>& fn);

}  // namespace subseg
