#pragma once

#include <cstddef>
#include <functional>

namespace mtev {

/// Hardware concurrency, at least 1.
unsigned default_workers();

/// Runs body(i) for i in [0, count) on up to `workers` threads using
/// contiguous static chunks. If items throw, one of the exceptions is
/// rethrown after all threads have joined.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace mtev
