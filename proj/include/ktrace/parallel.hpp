#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ktrace {

// Worker count resolution: explicit argument > KTRACE_THREADS > hardware.
int resolve_workers(int requested = 0);

// Runs body(i) for i in [0, count). Work is split into contiguous blocks;
// each index is processed exactly once. body must be safe to call from
// multiple threads for distinct i.
void parallel_for(std::int64_t count,
                  const std::function<void(std::int64_t)>& body,
                  int workers = 0);

// Fixed-topology pairwise reduction. The result depends only on the values
// and their order, never on thread count, which is what makes Monte Carlo
// aggregates bit-identical for any worker configuration.
double tree_sum(const std::vector<double>& values);

}  // namespace ktrace
