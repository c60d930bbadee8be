#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace wmd {

// Process-wide worker count used by table and sweep loops. Results never
// depend on it: every loop writes into per-index slots and is merged in
// index order afterwards.
void set_worker_threads(unsigned count);
unsigned worker_threads();

// Runs body(i) for i in [0, count). The first exception (by index) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace wmd
