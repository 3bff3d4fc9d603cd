#pragma once

// Deterministic helper for embarrassingly parallel loops over disjoint
// output ranges (per-frame smoothing, warping, rendering). Work is split
// into fixed contiguous chunks, so results are bitwise independent of the
// thread count. Never used around reductions or solver iterations.

#include <cstddef>
#include <functional>

namespace hof {

// Caps the number of worker threads (default: hardware concurrency).
void set_max_threads(int n);
int max_threads();

// Runs fn(i) for i in [0, n); grain is the minimum work per thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t grain = 1);

}  // namespace hof
