#pragma once

#include <cstddef>
#include <functional>

namespace riskpde {

/// Caps the worker count used by per-realization loops. Outputs are bitwise
/// independent of this setting: workers only write disjoint slices, and every
/// scalar reduction in the library runs sequentially in a fixed order.
void set_max_threads(std::size_t n);

std::size_t max_threads();

/// Runs fn(i) for i in [0, n). Serial when max_threads() == 1 or n <= 1;
/// otherwise strided across at most max_threads() threads. The first
/// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace riskpde
