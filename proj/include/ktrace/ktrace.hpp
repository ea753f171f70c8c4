#pragma once

#include "ktrace/hermitian.hpp"

namespace ktrace {

struct KTraceValue {
  int n = 0;
  int k = 0;
  double value = 0.0;
  // |Im| of the raw complex result before truncation to real.
  double imag_residue = 0.0;
  // Set when cancellation ate more than 12 digits of headroom.
  bool cond_warning = false;
};

// All elementary symmetric polynomials e_0..e_n of the entries, by the
// coefficient recurrence for prod (x + lambda_i) with compensated
// accumulation per coefficient.
std::vector<double> elementary_symmetric(const RVector& lambda);

// Route 1: eigenvalues then symmetric-polynomial recurrence.
KTraceValue trace_k_eigen(const HermitianMatrix& a, int k);

// Route 2: literal sum of all k x k principal minors. Budget C(n,k) <= 1e6.
KTraceValue trace_k_minors(const CMatrix& a, int k);
KTraceValue trace_k_minors(const HermitianMatrix& a, int k);

// Route 3: characteristic-polynomial coefficient via the Faddeev-LeVerrier
// trace recurrence; works for any square complex matrix.
KTraceValue trace_k_charpoly(const CMatrix& a, int k);

// |trace_k[AB] - trace_k[BA]|, both through the charpoly route since the
// products need not be Hermitian.
double check_cyclic(const CMatrix& a, const CMatrix& b, int k);

struct KTraceBrackets {
  double lower = 0.0;  // product of the k largest eigenvalues
  double upper = 0.0;  // C(n,k) times that product
  double value = 0.0;  // trace_k itself, for reporting
};

// For PSD input: prod_{i<=k} lambda_i <= trace_k[A] <= C(n,k) * prod; the
// containment is verified and a SolverError raised if numerics break it.
KTraceBrackets ktrace_brackets(const HermitianMatrix& a_psd, int k);

// ln e_k(exp(mu_1), ..., exp(mu_n)) by a log-space recurrence; immune to
// overflow for any eigenvalue spread.
double log_elementary_symmetric_exp(const RVector& mu, int k);

// ln trace_k[exp(S)] without forming exp(S).
double log_trace_k_exp(const HermitianMatrix& s, int k);

}  // namespace ktrace
