#include "pretlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

namespace pretlab {

unsigned thread_count() {
  static unsigned count = [] {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned def = std::min(hw, 4u);
    if (const char* env = std::getenv("PRETLAB_THREADS")) {
      long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return std::min(static_cast<unsigned>(v), hw);
    }
    return def;
  }();
  return count;
}

double parallel_row_sum(long rows, const std::function<double(long)>& row_sum) {
  if (rows <= 0) return 0.0;
  unsigned workers = std::min<unsigned>(thread_count(), static_cast<unsigned>(rows));
  std::vector<double> per_row(static_cast<std::size_t>(rows), 0.0);
  if (workers <= 1) {
    for (long i = 0; i < rows; ++i) per_row[i] = row_sum(i);
  } else {
    std::atomic<long> next{0};
    auto work = [&] {
      for (;;) {
        long i = next.fetch_add(1);
        if (i >= rows) return;
        per_row[i] = row_sum(i);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  double total = 0.0;
  for (double v : per_row) total += v;
  return total;
}

}  // namespace pretlab
