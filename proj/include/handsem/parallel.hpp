#pragma once

#include <functional>

namespace handsem {

// Upper bound on worker threads used by the library; 0 means hardware
// concurrency. Defaults to 1.
void set_max_threads(int threads);
int max_threads();

// Runs fn(i) for i in [0, n). Each index is handled by exactly one worker, so
// callers writing to per-index slots get schedule-independent results. When
// several indices throw, the exception from the lowest index is rethrown.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace handsem
