#pragma once

#include <cstddef>
#include <functional>

namespace tjd {

/// Worker count: TJD_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
int thread_budget();

/// Calls body(i) for i in [0, n) across up to thread_budget() threads.
/// Bodies must write only to slots they own; callers reduce afterwards in
/// index order.
void parallel_for(size_t n, const std::function<void(size_t)>& body);

}  // namespace tjd
