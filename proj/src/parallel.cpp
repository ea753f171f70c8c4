#include "ktrace/parallel.hpp"

#include <cstdlib>
#include <thread>

#include "ktrace/errors.hpp"

namespace ktrace {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KTRACE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return int(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

void parallel_for(std::int64_t count,
                  const std::function<void(std::int64_t)>& body,
                  int workers) {
  if (count <= 0) return;
  int w = resolve_workers(workers);
  if (w > count) w = int(count);
  if (w <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  std::int64_t chunk = (count + w - 1) / w;
  for (int t = 0; t < w; ++t) {
    std::int64_t lo = t * chunk;
    std::int64_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::int64_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

double tree_sum(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  std::vector<double> level = values;
  while (level.size() > 1) {
    std::vector<double> next((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      next[i / 2] = level[i] + level[i + 1];
    }
    if (level.size() % 2 == 1) next.back() = level.back();
    level.swap(next);
  }
  return level[0];
}

}  // namespace ktrace
