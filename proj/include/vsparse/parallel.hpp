#pragma once

#include <functional>

namespace vsparse {

/// Resolve a requested worker count: n <= 0 means "use VSPARSE_THREADS if
/// set, else hardware concurrency".
int resolve_threads(int requested);

/// Run fn(i) for i in [0, count) across at most `threads` workers.
/// Each index is processed exactly once; callers write results into
/// pre-sized slots indexed by i, so the outcome is independent of the
/// thread count. The first exception thrown by any worker is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace vsparse
