#pragma once

#include <cstddef>
#include <functional>

namespace hilfer {

/// Worker count for internal loops: HILFER_THREADS if set and positive,
/// otherwise std::thread::hardware_concurrency(), never less than 1.
std::size_t thread_budget();

/// Runs body(i) for i in [0, count) on up to thread_budget() threads.
/// Each index is visited exactly once; body must only write to slots owned by i,
/// so results do not depend on the schedule. The first exception thrown by any
/// worker is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hilfer
