#pragma once

#include <cstddef>
#include <functional>

namespace dmnls {

/// Worker cap: DMNLS_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs task(i) for i in [0, count). Each index runs exactly once; callers
/// write results into per-index slots and reduce them in index order, which
/// keeps results independent of the number of workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace dmnls
