#pragma once

#include <cstddef>
#include <functional>

namespace sgbc::parallel {

/// Number of worker threads used by parallel_for (default 1).
void set_threads(int n);
int threads();

/// Runs body(chunk) for chunk in [0, chunks). Chunks write disjoint output,
/// so results are independent of the thread count.
void parallel_for(std::size_t chunks, const std::function<void(std::size_t)>& body);

}  // namespace sgbc::parallel
