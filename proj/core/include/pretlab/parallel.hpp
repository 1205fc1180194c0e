#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace pretlab {

// Worker cap: PRETLAB_THREADS when set, else min(hardware, 4).
unsigned thread_count();

// Evaluates row_sum(i) for i in [0, rows) across workers, then reduces the
// per-row results in index order, so the total is identical for any worker
// count.
double parallel_row_sum(long rows, const std::function<double(long)>& row_sum);

}  // namespace pretlab
