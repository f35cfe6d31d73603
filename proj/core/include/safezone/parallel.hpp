#pragma once

#include <cstdint>
#include <functional>

namespace safezone {

// Worker cap: SAFEZONE_THREADS when set (minimum 1), else the hardware
// concurrency.
int worker_count();

// Runs body(0..n-1) across workers. Callers keep determinism by writing only
// to per-index slots; scheduling order is unspecified.
void parallel_for(int64_t n, const std::function<void(int64_t)>& body);

} // namespace safezone
