#pragma once

#include <functional>

namespace objper {

/// Worker count: hardware concurrency, capped by the OBJPER_THREADS
/// environment variable when set. Always >= 1.
int recommended_threads();

/// Runs fn(i) for i in [0, n). Tasks must be independent; results should be
/// written to preallocated slots so the outcome does not depend on thread
/// count. Exceptions are rethrown in index order. Nested calls run serially.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace objper
