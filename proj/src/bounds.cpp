#include "ktrace/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "ktrace/errors.hpp"
#include "ktrace/ktrace.hpp"
#include "ktrace/parallel.hpp"

namespace ktrace {

namespace {

constexpr double kExpCap = 700.0;

void check_k(int k, int n, const char* who) {
  if (k < 1 || k > n) {
    throw ArgumentError(std::string(who) + ": order k = " + std::to_string(k) +
                        " outside [1, " + std::to_string(n) + "]");
  }
}

double spectral_bounds(const HermitianMatrix& a, double* lambda_min) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.mat(), Eigen::EigenvaluesOnly);
  if (lambda_min) *lambda_min = es.eigenvalues().minCoeff();
  return es.eigenvalues().maxCoeff();
}

}  // namespace

void validate_ensemble(EnsembleSpec& spec) {
  if (spec.n < 1) throw ConfigError("ensemble: dimension must be >= 1");
  if (spec.summands.empty()) {
    throw ConfigError("ensemble: at least one summand required");
  }
  if (spec.c && *spec.c < 0.0) {
    throw ConfigError("ensemble: spectral bound c must be nonnegative");
  }
  bool all_psd = true;
  for (std::size_t i = 0; i < spec.summands.size(); ++i) {
    const auto& summand = spec.summands[i];
    if (summand.atoms.empty()) {
      throw ConfigError("ensemble: summand " + std::to_string(i) +
                        " has no atoms");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < summand.atoms.size(); ++j) {
      const auto& atom = summand.atoms[j];
      if (atom.probability < 0.0) {
        throw ConfigError("ensemble: summand " + std::to_string(i) + " atom " +
                          std::to_string(j) + " has negative probability");
      }
      if (atom.matrix.dim() != spec.n) {
        throw ConfigError("ensemble: summand " + std::to_string(i) + " atom " +
                          std::to_string(j) + " has dimension " +
                          std::to_string(atom.matrix.dim()) + ", expected " +
                          std::to_string(spec.n));
      }
      double lo = 0.0;
      double hi = spectral_bounds(atom.matrix, &lo);
      double tol = 1e-10 * std::max(spec.c ? *spec.c : 1.0, 1.0);
      if (lo < -tol) all_psd = false;
      if (spec.c && (lo < -tol || hi > *spec.c + tol)) {
        throw ConfigError("ensemble: summand " + std::to_string(i) + " atom " +
                          std::to_string(j) + " violates 0 <= lambda <= c (" +
                          std::to_string(lo) + ", " + std::to_string(hi) +
                          ")");
      }
      total += atom.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ConfigError("ensemble: summand " + std::to_string(i) +
                        " probabilities sum to " + std::to_string(total));
    }
  }
  spec.psd_flag = all_psd;
}

double max_atom_spectral_norm(const EnsembleSpec& spec) {
  double best = 0.0;
  for (const auto& summand : spec.summands) {
    for (const auto& atom : summand.atoms) {
      double lo = 0.0;
      double hi = spectral_bounds(atom.matrix, &lo);
      best = std::max(best, std::max(std::abs(lo), std::abs(hi)));
    }
  }
  return best;
}

HermitianMatrix expectation_matrix(const EnsembleSpec& spec) {
  CMatrix acc = CMatrix::Zero(spec.n, spec.n);
  for (const auto& summand : spec.summands) acc += summand.mean().mat();
  return hermitian_unchecked((acc + acc.adjoint()) / 2.0);
}

RVector expectation_spectrum(const EnsembleSpec& spec) {
  return decompose(expectation_matrix(spec)).eigenvalues;
}

double top_k_sum(const RVector& descending, int k) {
  check_k(k, int(descending.size()), "top_k_sum");
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += descending[i];
  return s;
}

double bottom_k_sum(const RVector& descending, int k) {
  int n = int(descending.size());
  check_k(k, n, "bottom_k_sum");
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += descending[n - 1 - i];
  return s;
}

ThetaGrid ThetaGrid::log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw ArgumentError("ThetaGrid: need 0 < lo < hi and count >= 2");
  }
  ThetaGrid grid;
  grid.points.resize(count);
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i) {
    grid.points[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
  }
  return grid;
}

ThetaGrid default_theta_grid(const EnsembleSpec& spec) {
  double c_eff = max_atom_spectral_norm(spec);
  double hi = c_eff > 0.0 ? 50.0 / c_eff : 50.0;
  if (hi <= 1e-3) hi = 1e-2;
  return ThetaGrid::log_spaced(1e-3, hi, 64);
}

void attach_ground_truth(BoundReport& report, double truth,
                         const std::string& truth_kind) {
  report.ground_truth = truth;
  report.ground_truth_kind = truth_kind;
  bool upper_type = report.kind.find("tail") != std::string::npos ||
                    report.branch == Branch::top;
  report.slack = upper_type ? report.bound - truth : truth - report.bound;
}

bool mgf_in_range(const FiniteSupportMatrix& summand, double theta) {
  double summand_lo = std::numeric_limits<double>::infinity();
  double summand_hi = -summand_lo;
  for (const auto& atom : summand.atoms) {
    double lo = 0.0;
    double hi = spectral_bounds(atom.matrix, &lo);
    double reach = std::max(std::abs(theta * lo), std::abs(theta * hi));
    if (reach > kExpCap) return false;
    summand_lo = std::min(summand_lo, lo);
    summand_hi = std::max(summand_hi, hi);
  }
  // The small eigenvalues of E exp(theta X) carry a relative error of about
  // eps * exp(theta * spread) after the eigensolve, which lands verbatim in
  // the log-CGF. exp(12) ~ 1.6e5 keeps that error near 1e-10 so optimizers
  // cannot report a bound that undercuts an exact mean at certification
  // tolerance; such theta are reported invalid rather than silently wrong.
  // Bounds stay valid: they are infima over the surviving theta.
  return std::abs(theta) * (summand_hi - summand_lo) <= 12.0;
}

HermitianMatrix matrix_mgf(const FiniteSupportMatrix& summand, double theta) {
  if (summand.atoms.empty()) throw ArgumentError("matrix_mgf: no atoms");
  if (!mgf_in_range(summand, theta)) {
    throw SolverError("matrix_mgf: eigenvalue exponent exceeds " +
                      std::to_string(kExpCap));
  }
  int n = summand.dim();
  CMatrix acc = CMatrix::Zero(n, n);
  for (const auto& atom : summand.atoms) {
    if (atom.probability == 0.0) continue;
    acc += atom.probability * matrix_exp(atom.matrix.scaled(theta)).mat();
  }
  return hermitian_unchecked((acc + acc.adjoint()) / 2.0);
}

HermitianMatrix cgf_sum(const EnsembleSpec& spec, double theta) {
  CMatrix acc = CMatrix::Zero(spec.n, spec.n);
  for (const auto& summand : spec.summands) {
    acc += matrix_log(matrix_mgf(summand, theta)).mat();
  }
  return hermitian_unchecked((acc + acc.adjoint()) / 2.0);
}

double log_trace_k_exp_cgf(const EnsembleSpec& spec, int k, double theta) {
  check_k(k, spec.n, "log_trace_k_exp_cgf");
  return log_trace_k_exp(cgf_sum(spec, theta), k);
}

namespace {

using Evaluator = std::function<std::optional<double>(double)>;

struct Optimized {
  std::vector<CurvePoint> curve;
  double best_theta = 0.0;
  double best_value = 0.0;
};

// Grid scan (parallel, assembled in index order) followed by golden-section
// refinement inside the bracket around the best grid point. `value_at` takes
// the positive grid magnitude; curve theta is signed by `theta_sign`.
// Objectives are minimized; callers negate for sup-type bounds.
Optimized optimize_on_grid(const std::vector<double>& grid,
                           const Evaluator& value_at, double theta_sign,
                           const char* who) {
  int count = int(grid.size());
  std::vector<std::optional<double>> values(count);
  parallel_for(count,
               [&](std::int64_t i) { values[i] = value_at(grid[i]); });

  Optimized out;
  out.curve.resize(count);
  int best = -1;
  for (int i = 0; i < count; ++i) {
    CurvePoint& pt = out.curve[i];
    pt.theta = theta_sign * grid[i];
    pt.valid = values[i].has_value();
    pt.value = pt.valid ? *values[i] : 0.0;
    if (pt.valid && (best < 0 || *values[i] < *values[best])) best = i;
  }
  if (best < 0) {
    throw SolverError(std::string(who) +
                      ": every grid point overflowed; shrink the theta grid");
  }

  double lo = grid[std::max(best - 1, 0)];
  double hi = grid[std::min(best + 1, count - 1)];
  double best_theta = grid[best];
  double best_value = *values[best];
  auto probe = [&](double m) {
    std::optional<double> v = value_at(m);
    if (v && *v < best_value) {
      best_value = *v;
      best_theta = m;
    }
    return v ? *v : std::numeric_limits<double>::infinity();
  };
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = probe(x1);
  double f2 = probe(x2);
  for (int iter = 0; iter < 40; ++iter) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = probe(x2);
    }
  }
  out.best_theta = theta_sign * best_theta;
  out.best_value = best_value;
  return out;
}

}  // namespace

BoundReport master_expectation_bound(const EnsembleSpec& spec, int k,
                                     const ThetaGrid& grid, Branch branch) {
  check_k(k, spec.n, "master_expectation_bound");
  double sign = branch == Branch::top ? 1.0 : -1.0;
  // Top: minimize (1/theta) ln trace_k over theta > 0. Bottom: maximize the
  // same expression over theta < 0, i.e. minimize its negation at -m.
  Evaluator value_at = [&](double m) -> std::optional<double> {
    double theta = sign * m;
    for (const auto& summand : spec.summands) {
      if (!mgf_in_range(summand, theta)) return std::nullopt;
    }
    // At theta = -m the bottom objective (1/theta) ln trace_k equals -lv/m;
    // maximizing it is the same minimization of lv/m as the top branch.
    double lv = log_trace_k_exp_cgf(spec, k, theta);
    return lv / m;
  };
  Optimized opt = optimize_on_grid(grid.points, value_at, sign,
                                   "master_expectation_bound");
  BoundReport report;
  report.kind = "master_expectation";
  report.branch = branch;
  report.k = k;
  report.best_theta = opt.best_theta;
  if (branch == Branch::top) {
    report.bound = opt.best_value;
    report.curve = opt.curve;
  } else {
    // Objective was minimized as (1/m) ln trace_k at theta = -m, which is
    // the negation of (1/theta) ln trace_k; flip back for reporting.
    report.bound = -opt.best_value;
    report.curve = opt.curve;
    for (auto& pt : report.curve) pt.value = -pt.value;
  }
  return report;
}

BoundReport master_tail_bound(const EnsembleSpec& spec, int k, double t,
                              const ThetaGrid& grid, Branch branch) {
  check_k(k, spec.n, "master_tail_bound");
  double sign = branch == Branch::top ? 1.0 : -1.0;
  Evaluator log_value_at = [&](double m) -> std::optional<double> {
    double theta = sign * m;
    for (const auto& summand : spec.summands) {
      if (!mgf_in_range(summand, theta)) return std::nullopt;
    }
    double lv = log_trace_k_exp_cgf(spec, k, theta);
    return -theta * t / k + lv / k;
  };
  Optimized opt =
      optimize_on_grid(grid.points, log_value_at, sign, "master_tail_bound");
  BoundReport report;
  report.kind = "master_tail";
  report.branch = branch;
  report.k = k;
  report.t = t;
  report.best_theta = opt.best_theta;
  report.bound = std::exp(opt.best_value);
  report.bound_clipped = std::min(report.bound, 1.0);
  report.curve = opt.curve;
  for (auto& pt : report.curve) {
    if (pt.valid) pt.value = std::exp(pt.value);
  }
  return report;
}

double mgf_dominance_gap(const FiniteSupportMatrix& summand, double theta,
                         double c) {
  if (summand.atoms.empty()) throw ArgumentError("mgf_dominance_gap: no atoms");
  if (c < 0.0) throw ArgumentError("mgf_dominance_gap: c must be >= 0");
  for (const auto& atom : summand.atoms) {
    double lo = 0.0;
    double hi = spectral_bounds(atom.matrix, &lo);
    double tol = 1e-10 * std::max(c, 1.0);
    if (lo < -tol || hi > c + tol) {
      throw DomainError("mgf_dominance_gap: atom violates 0 <= lambda <= c");
    }
  }
  double g = c == 0.0 ? theta : std::expm1(theta * c) / c;
  HermitianMatrix lhs = summand.mean().scaled(g) -
                        matrix_log(matrix_mgf(summand, theta));
  double lo = 0.0;
  spectral_bounds(lhs, &lo);
  return lo;
}

namespace {

void require_chernoff_ready(const EnsembleSpec& spec, const char* who) {
  if (!spec.c) {
    throw ConfigError(std::string(who) +
                      ": ensemble lacks the uniform spectral bound c");
  }
  if (!spec.psd_flag) {
    throw ConfigError(std::string(who) + ": ensemble atoms are not all PSD");
  }
}

std::pair<BoundReport, BoundReport> scaled_expectation_bounds(
    const EnsembleSpec& spec, int k, const ThetaGrid& grid, double log_factor,
    const char* kind, const char* who) {
  require_chernoff_ready(spec, who);
  double c = *spec.c;
  RVector spectrum = expectation_spectrum(spec);
  double mu_top = top_k_sum(spectrum, k);
  double mu_bot = bottom_k_sum(spectrum, k);

  Evaluator upper_at = [&](double m) -> std::optional<double> {
    if (m > kExpCap) return std::nullopt;
    return std::expm1(m) / m * mu_top + c / m * log_factor;
  };
  Optimized upper = optimize_on_grid(grid.points, upper_at, 1.0, who);

  // Lower bound is a sup: minimize the negation.
  Evaluator lower_at = [&](double m) -> std::optional<double> {
    return -(-std::expm1(-m) / m * mu_bot - c / m * log_factor);
  };
  Optimized lower = optimize_on_grid(grid.points, lower_at, 1.0, who);

  BoundReport up;
  up.kind = kind;
  up.branch = Branch::top;
  up.k = k;
  up.best_theta = upper.best_theta;
  up.bound = upper.best_value;
  up.curve = upper.curve;

  BoundReport low;
  low.kind = kind;
  low.branch = Branch::bottom;
  low.k = k;
  low.best_theta = lower.best_theta;
  low.bound = -lower.best_value;
  low.curve = lower.curve;
  for (auto& pt : low.curve) pt.value = -pt.value;
  return {up, low};
}

}  // namespace

std::pair<BoundReport, BoundReport> chernoff_expectation_bounds(
    const EnsembleSpec& spec, int k, const ThetaGrid& grid) {
  check_k(k, spec.n, "chernoff_expectation_bounds");
  return scaled_expectation_bounds(spec, k, grid, log_binomial(spec.n, k),
                                   "chernoff_expectation",
                                   "chernoff_expectation_bounds");
}

std::pair<BoundReport, BoundReport> subspace_comparison_bounds(
    const EnsembleSpec& spec, int k, const ThetaGrid& grid) {
  check_k(k, spec.n, "subspace_comparison_bounds");
  return scaled_expectation_bounds(
      spec, k, grid, log_falling_factorial(spec.n, k), "subspace_expectation",
      "subspace_comparison_bounds");
}

std::pair<BoundReport, BoundReport> chernoff_tail_bounds(
    const EnsembleSpec& spec, int k, double epsilon) {
  check_k(k, spec.n, "chernoff_tail_bounds");
  require_chernoff_ready(spec, "chernoff_tail_bounds");
  double c = *spec.c;
  if (c <= 0.0) {
    throw ArgumentError("chernoff_tail_bounds: c must be positive");
  }
  if (epsilon < 0.0 || epsilon >= 1.0) {
    throw ArgumentError(
        "chernoff_tail_bounds: epsilon must lie in [0, 1) so both tails are "
        "defined");
  }
  RVector spectrum = expectation_spectrum(spec);
  double lbinom = log_binomial(spec.n, k);
  ThetaGrid grid = default_theta_grid(spec);

  // Pre-optimized Laplace expression h(theta) =
  // C(n,k)^{1/k} exp((g(theta) - (1 -+ eps) theta) mu / k), g = (e^{theta c}-1)/c.
  auto laplace_curve = [&](double mu, double dev, double sign) {
    std::vector<CurvePoint> curve(grid.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      double theta = sign * grid.points[i];
      CurvePoint& pt = curve[i];
      pt.theta = theta;
      if (std::abs(theta * c) > kExpCap) {
        pt.valid = false;
        continue;
      }
      double g = std::expm1(theta * c) / c;
      pt.value = std::exp(lbinom / k + (g - dev * theta) * mu / k);
      pt.valid = std::isfinite(pt.value);
    }
    return curve;
  };

  double mu_top = top_k_sum(spectrum, k);
  BoundReport up;
  up.kind = "chernoff_tail";
  up.branch = Branch::top;
  up.k = k;
  up.epsilon = epsilon;
  up.t = (1.0 + epsilon) * mu_top;
  up.best_theta = std::log1p(epsilon) / c;
  up.bound = std::exp(lbinom / k + (epsilon - (1.0 + epsilon) * std::log1p(epsilon)) *
                                       mu_top / (c * k));
  up.bound_clipped = std::min(up.bound, 1.0);
  up.curve = laplace_curve(mu_top, 1.0 + epsilon, 1.0);

  double mu_bot = bottom_k_sum(spectrum, k);
  BoundReport low;
  low.kind = "chernoff_tail";
  low.branch = Branch::bottom;
  low.k = k;
  low.epsilon = epsilon;
  low.t = (1.0 - epsilon) * mu_bot;
  low.best_theta = std::log1p(-epsilon) / c;
  low.bound = std::exp(lbinom / k + (-epsilon - (1.0 - epsilon) * std::log1p(-epsilon)) *
                                        mu_bot / (c * k));
  low.bound_clipped = std::min(low.bound, 1.0);
  low.curve = laplace_curve(mu_bot, 1.0 - epsilon, -1.0);
  return {up, low};
}

}  // namespace ktrace
