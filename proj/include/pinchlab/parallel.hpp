#pragma once

#include <functional>

namespace pinchlab {

// Worker count: hardware concurrency capped by the PINCHLAB_THREADS env var.
int thread_budget();

// Runs body(begin, end) on contiguous chunks of [0, n), possibly concurrently.
// Chunk boundaries are deterministic; bodies must write disjoint state.
void parallel_for(int n, const std::function<void(int, int)>& body);

}  // namespace pinchlab
