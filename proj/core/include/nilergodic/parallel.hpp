#pragma once

#include <cstddef>
#include <functional>

namespace nilergodic {

inline constexpr const char* kThreadsEnv = "NILERGODIC_THREADS";

/// Worker count: $NILERGODIC_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. Callers write results
/// into per-index slots and reduce afterwards in index order, so output never
/// depends on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nilergodic
