#pragma once

#include <cstddef>
#include <functional>

namespace uac {

/// Worker count from UAC_THREADS, else the hardware concurrency.
unsigned thread_count();

/// Runs fn(i) for i in [0, count) on thread_count() workers. Exceptions are
/// rethrown after all workers stop (the one with the lowest index wins).
void parallel_for(size_t count, const std::function<void(size_t)>& fn);

} // namespace uac
