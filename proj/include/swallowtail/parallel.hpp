#pragma once

#include <cstddef>
#include <functional>

namespace swallowtail {

/// Worker count: SWALLOWTAIL_THREADS when set and positive, otherwise the
/// hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each
/// index is visited exactly once; callers write results into per-index slots
/// so the merged output does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace swallowtail
