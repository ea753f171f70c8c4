#pragma once

#include <optional>
#include <string>

#include "ktrace/finite_support.hpp"

namespace ktrace {

// A sum of independent finite-support random Hermitian matrices, plus the
// optional uniform spectral bound c required by the Chernoff forms.
struct EnsembleSpec {
  int n = 0;
  std::vector<FiniteSupportMatrix> summands;
  std::optional<double> c;
  bool psd_flag = false;
};

// Checks probabilities (nonnegative, summing to 1 within 1e-12), dimensions,
// and, when c is present, that every atom satisfies 0 <= lambda <= c. Sets
// psd_flag. Throws ConfigError naming the offending summand/atom.
void validate_ensemble(EnsembleSpec& spec);

double max_atom_spectral_norm(const EnsembleSpec& spec);

HermitianMatrix expectation_matrix(const EnsembleSpec& spec);

// Eigenvalues of E[Y], descending.
RVector expectation_spectrum(const EnsembleSpec& spec);

double top_k_sum(const RVector& descending, int k);
double bottom_k_sum(const RVector& descending, int k);

struct ThetaGrid {
  std::vector<double> points;  // strictly positive, ascending

  static ThetaGrid log_spaced(double lo, double hi, int count);
};

// 64 log-spaced points in [1e-3, 50 / c_eff], c_eff the largest atom
// spectral norm.
ThetaGrid default_theta_grid(const EnsembleSpec& spec);

enum class Branch { top, bottom };

struct CurvePoint {
  double theta = 0.0;  // signed as evaluated
  double value = 0.0;
  bool valid = true;
};

struct BoundReport {
  std::string kind;
  Branch branch = Branch::top;
  int k = 0;
  std::optional<double> t;
  std::optional<double> epsilon;
  std::vector<CurvePoint> curve;
  double best_theta = 0.0;
  double bound = 0.0;
  std::optional<double> bound_clipped;  // tails only: min(bound, 1)
  std::optional<double> ground_truth;
  std::string ground_truth_kind;  // "exhaustive" or "monte_carlo"
  // Margin in the valid direction (upper bounds: bound - truth; lower
  // bounds: truth - bound), so nonnegative always means the bound holds.
  std::optional<double> slack;
};

// Computes slack per the report's kind/branch and attaches the truth value.
void attach_ground_truth(BoundReport& report, double truth,
                         const std::string& truth_kind);

// True when every eigenvalue exponent theta * lambda(atom) stays within
// +-700 and the summand's exponent spread stays below 12, the policy bounds
// for marking curve points invalid (overflow and log-CGF conditioning).
bool mgf_in_range(const FiniteSupportMatrix& summand, double theta);

// E exp(theta X) over the finite support; exact, PD.
HermitianMatrix matrix_mgf(const FiniteSupportMatrix& summand, double theta);

// Sum over summands of ln E exp(theta X).
HermitianMatrix cgf_sum(const EnsembleSpec& spec, double theta);

// ln trace_k[exp(cgf_sum(theta))], evaluated in log space.
double log_trace_k_exp_cgf(const EnsembleSpec& spec, int k, double theta);

// inf_{theta>0} (1/theta) ln trace_k[exp cgf] for the top-k eigenvalue sum;
// the bottom branch evaluates theta < 0 and takes the sup.
BoundReport master_expectation_bound(const EnsembleSpec& spec, int k,
                                     const ThetaGrid& grid, Branch branch);

// Tail bound at threshold t: inf e^{-theta t / k} (trace_k[exp cgf])^{1/k},
// theta > 0 for the top branch, theta < 0 for the bottom branch.
BoundReport master_tail_bound(const EnsembleSpec& spec, int k, double t,
                              const ThetaGrid& grid, Branch branch);

// Smallest eigenvalue of ((e^{theta c}-1)/c) E[X] - ln E exp(theta X);
// nonnegative when the MGF dominance estimate holds.
double mgf_dominance_gap(const FiniteSupportMatrix& summand, double theta,
                         double c);

// Chernoff expectation estimates for 0 <= lambda(atom) <= c ensembles:
// upper: inf_{theta>0} ((e^theta - 1)/theta) mu_top + (c/theta) ln C(n,k),
// lower: sup_{theta>0} ((1 - e^-theta)/theta) mu_bot - (c/theta) ln C(n,k).
std::pair<BoundReport, BoundReport> chernoff_expectation_bounds(
    const EnsembleSpec& spec, int k, const ThetaGrid& grid);

// Closed-form Chernoff tails at relative deviation epsilon; the curve holds
// the pre-optimized Laplace expression on the default grid so callers can
// cross-check the optimizer theta* = ln(1 +/- epsilon)/c.
std::pair<BoundReport, BoundReport> chernoff_tail_bounds(
    const EnsembleSpec& spec, int k, double epsilon);

// Same structure as chernoff_expectation_bounds with the summed subspace
// log factor ln prod_{i<=k}(n-i+1) in place of ln C(n,k).
std::pair<BoundReport, BoundReport> subspace_comparison_bounds(
    const EnsembleSpec& spec, int k, const ThetaGrid& grid);

}  // namespace ktrace
