#pragma once

#include <cstddef>
#include <functional>

namespace agen {

/// Worker cap: TOOL_THREADS if set to a positive integer, else the hardware
/// concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Each index is handled exactly once and
/// callers write into per-index slots, so results never depend on
/// scheduling. Calls made from inside a worker run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace agen
