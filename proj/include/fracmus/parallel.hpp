#pragma once

#include <cstddef>
#include <functional>

namespace fracmus {

// Worker count used by the reductions below (default 1).
void set_threads(int n);
int threads();

// Sum of fn(i) for i in [0, n). Terms are grouped in fixed blocks and the
// block partials are combined in index order with compensation, so the
// result is bit-identical for every thread count.
double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& fn);

// Runs fn(i) for i in [0, n); fn must only write to slots owned by i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fracmus
