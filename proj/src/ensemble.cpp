#include "ktrace/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "ktrace/errors.hpp"
#include "ktrace/parallel.hpp"
#include "ktrace/random.hpp"

namespace ktrace {

EnsembleSpec er_laplacian_ensemble(int n, double p, double w_max) {
  if (n < 2) throw ArgumentError("er_laplacian_ensemble: need n >= 2");
  if (p < 0.0 || p > 1.0) {
    throw ArgumentError("er_laplacian_ensemble: p must lie in [0, 1]");
  }
  if (w_max < 0.0) {
    throw ArgumentError("er_laplacian_ensemble: w_max must be >= 0");
  }
  EnsembleSpec spec;
  spec.n = n;
  spec.c = 2.0 * w_max;
  HermitianMatrix zero = HermitianMatrix::zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      CMatrix edge = CMatrix::Zero(n, n);
      edge(i, i) = w_max;
      edge(j, j) = w_max;
      edge(i, j) = -w_max;
      edge(j, i) = -w_max;
      FiniteSupportMatrix summand;
      summand.atoms.push_back({1.0 - p, zero});
      summand.atoms.push_back({p, hermitian_unchecked(edge)});
      spec.summands.push_back(std::move(summand));
    }
  }
  validate_ensemble(spec);
  return spec;
}

namespace {

// Eigenvalue prefix sums of one sampled matrix, written into slot s of each
// per-k column so that aggregation order never depends on thread layout.
void eigen_prefix_sums(const CMatrix& y, int n, std::int64_t s,
                       std::vector<std::vector<double>>& top,
                       std::vector<std::vector<double>>& bot) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(y, Eigen::EigenvaluesOnly);
  const auto& lambda = es.eigenvalues();  // ascending
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    acc += lambda[n - k];
    top[k - 1][s] = acc;
  }
  acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    acc += lambda[k - 1];
    bot[k - 1][s] = acc;
  }
}

}  // namespace

SampleStats sample_sum(const EnsembleSpec& spec, std::uint64_t seed,
                       std::int64_t count, const std::vector<TailQuery>& tails,
                       int workers) {
  if (count < 1) throw ArgumentError("sample_sum: need at least one sample");
  int n = spec.n;
  for (const auto& query : tails) {
    if (query.k < 1 || query.k > n) {
      throw ArgumentError("sample_sum: tail query k outside [1, n]");
    }
  }

  std::vector<std::vector<double>> top(n), bot(n);
  for (int k = 0; k < n; ++k) {
    top[k].assign(count, 0.0);
    bot[k].assign(count, 0.0);
  }

  parallel_for(
      count,
      [&](std::int64_t s) {
        Rng rng = Rng::derive(seed, std::uint64_t(s));
        CMatrix y = CMatrix::Zero(n, n);
        for (const auto& summand : spec.summands) {
          double u = rng.uniform();
          double cum = 0.0;
          const Atom* picked = &summand.atoms.back();
          for (const auto& atom : summand.atoms) {
            cum += atom.probability;
            if (u < cum) {
              picked = &atom;
              break;
            }
          }
          y += picked->matrix.mat();
        }
        eigen_prefix_sums(y, n, s, top, bot);
      },
      workers);

  SampleStats stats;
  stats.sample_count = count;
  stats.seed = seed;
  stats.n = n;
  stats.top_mean.resize(n);
  stats.top_stderr.resize(n);
  stats.bot_mean.resize(n);
  stats.bot_stderr.resize(n);

  std::vector<double> squares(count);
  auto reduce = [&](const std::vector<double>& column, double& mean_out,
                    double& stderr_out) {
    double mean = tree_sum(column) / double(count);
    for (std::int64_t s = 0; s < count; ++s) {
      squares[s] = column[s] * column[s];
    }
    double second = tree_sum(squares) / double(count);
    double variance = std::max(second - mean * mean, 0.0);
    mean_out = mean;
    stderr_out = std::sqrt(variance / double(count));
  };
  for (int k = 0; k < n; ++k) {
    reduce(top[k], stats.top_mean[k], stats.top_stderr[k]);
    reduce(bot[k], stats.bot_mean[k], stats.bot_stderr[k]);
  }

  std::vector<double> indicator(count);
  for (const auto& query : tails) {
    const auto& column = query.upper ? top[query.k - 1] : bot[query.k - 1];
    for (std::int64_t s = 0; s < count; ++s) {
      bool hit = query.upper ? column[s] >= query.threshold
                             : column[s] <= query.threshold;
      indicator[s] = hit ? 1.0 : 0.0;
    }
    stats.tails.push_back({query.k, query.upper, query.threshold,
                           tree_sum(indicator) / double(count)});
  }
  return stats;
}

double ExhaustiveStats::top_tail_ge(double t) const {
  CompensatedSum acc;
  for (const auto& [value, prob] : top_dist) {
    if (value >= t) acc.add(prob);
  }
  return acc.value();
}

double ExhaustiveStats::bot_tail_le(double t) const {
  CompensatedSum acc;
  for (const auto& [value, prob] : bot_dist) {
    if (value <= t) acc.add(prob);
  }
  return acc.value();
}

ExhaustiveStats exhaustive_expectations(const EnsembleSpec& spec, int k) {
  int n = spec.n;
  if (k < 1 || k > n) {
    throw ArgumentError("exhaustive_expectations: k outside [1, n]");
  }
  constexpr std::int64_t kCap = 1000000;
  if (joint_support_size(spec.summands, kCap) > kCap) {
    throw ResourceError(
        "exhaustive_expectations: joint support exceeds one million atoms; "
        "use sample_sum instead");
  }

  ExhaustiveStats stats;
  stats.k = k;
  CompensatedSum top_acc, bot_acc;
  for_each_joint_atom(spec.summands, [&](double prob,
                                         const std::vector<int>& choice) {
    CMatrix y = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < spec.summands.size(); ++i) {
      y += spec.summands[i].atoms[choice[i]].matrix.mat();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(y, Eigen::EigenvaluesOnly);
    const auto& lambda = es.eigenvalues();  // ascending
    double top_sum = 0.0, bot_sum = 0.0;
    for (int i = 0; i < k; ++i) {
      top_sum += lambda[n - 1 - i];
      bot_sum += lambda[i];
    }
    top_acc.add(prob * top_sum);
    bot_acc.add(prob * bot_sum);
    stats.top_dist.emplace_back(top_sum, prob);
    stats.bot_dist.emplace_back(bot_sum, prob);
  });
  stats.top_mean = top_acc.value();
  stats.bot_mean = bot_acc.value();
  std::sort(stats.top_dist.begin(), stats.top_dist.end());
  std::sort(stats.bot_dist.begin(), stats.bot_dist.end());
  return stats;
}

}  // namespace ktrace
