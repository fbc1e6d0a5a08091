#pragma once

#include <cstddef>
#include <functional>

namespace contest_forge {

/// Worker count from CONTEST_FORGE_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Runs fn(0..count-1) across worker_count() threads. Each index is handled
/// exactly once; callers write results by index so output order never
/// depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace contest_forge
