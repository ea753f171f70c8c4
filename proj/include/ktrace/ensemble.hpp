#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ktrace/bounds.hpp"
#include "ktrace/finite_support.hpp"

namespace ktrace {

// Erdos-Renyi graph Laplacian: one summand per vertex pair (i, j), taking the
// value w_max * ((e_i - e_j)(e_i - e_j)^T) with probability p and zero
// otherwise. Every atom satisfies 0 <= lambda <= c with c = 2 * w_max.
EnsembleSpec er_laplacian_ensemble(int n, double p, double w_max);

struct TailQuery {
  int k = 1;
  bool upper = true;       // true: count top-k sums >= threshold
  double threshold = 0.0;  // false: count bottom-k sums <= threshold
};

struct TailFrequency {
  int k = 1;
  bool upper = true;
  double threshold = 0.0;
  double frequency = 0.0;
};

// Monte-Carlo estimates of E[sum of k largest / smallest eigenvalues] of the
// sampled sum, for every k = 1..n at once (index k-1), plus empirical tail
// frequencies for the requested thresholds. Sample s draws its atoms from an
// Rng derived from (seed, s), and aggregation uses a fixed-shape pairwise
// tree, so results are bit-identical for any worker count.
struct SampleStats {
  std::int64_t sample_count = 0;
  std::uint64_t seed = 0;
  int n = 0;
  std::vector<double> top_mean, top_stderr;
  std::vector<double> bot_mean, bot_stderr;
  std::vector<TailFrequency> tails;
};

SampleStats sample_sum(const EnsembleSpec& spec, std::uint64_t seed,
                       std::int64_t count,
                       const std::vector<TailQuery>& tails = {},
                       int workers = 0);

// Exact expectations and distributions of the extreme eigenvalue sums by
// enumerating the joint support (refused above one million joint atoms).
struct ExhaustiveStats {
  int k = 1;
  double top_mean = 0.0;
  double bot_mean = 0.0;
  std::vector<std::pair<double, double>> top_dist;  // (value, prob), ascending
  std::vector<std::pair<double, double>> bot_dist;

  double top_tail_ge(double t) const;
  double bot_tail_le(double t) const;
};

ExhaustiveStats exhaustive_expectations(const EnsembleSpec& spec, int k);

}  // namespace ktrace
