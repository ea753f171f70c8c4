#include "ktrace/ktrace.hpp"

#include <cmath>
#include <limits>

#include "ktrace/errors.hpp"

namespace ktrace {

namespace {

void check_order(int n, int k, const char* who) {
  if (k < 1 || k > n) {
    throw ArgumentError(std::string(who) + ": order k = " + std::to_string(k) +
                        " outside [1, " + std::to_string(n) + "]");
  }
}

std::vector<CompensatedSum> esp_accumulators(const RVector& lambda) {
  int n = int(lambda.size());
  std::vector<CompensatedSum> c(n + 1);
  c[0].add(1.0);
  for (int i = 0; i < n; ++i) {
    int top = std::min(i + 1, n);
    for (int j = top; j >= 1; --j) {
      c[j].add(lambda[i] * c[j - 1].value());
    }
  }
  return c;
}

double logaddexp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

std::vector<double> elementary_symmetric(const RVector& lambda) {
  auto acc = esp_accumulators(lambda);
  std::vector<double> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].value();
  return out;
}

KTraceValue trace_k_eigen(const HermitianMatrix& a, int k) {
  int n = a.dim();
  check_order(n, k, "trace_k_eigen");
  SpectralDecomposition d = decompose(a);
  std::vector<double> e = elementary_symmetric(d.eigenvalues);
  std::vector<double> e_abs = elementary_symmetric(d.eigenvalues.cwiseAbs());
  KTraceValue v;
  v.n = n;
  v.k = k;
  v.value = e[k];
  v.imag_residue = 0.0;
  v.cond_warning = e_abs[k] > 1e12 * std::abs(e[k]);
  return v;
}

KTraceValue trace_k_minors(const CMatrix& a, int k) {
  int n = int(a.rows());
  if (a.rows() != a.cols()) throw ArgumentError("trace_k_minors: square input");
  check_order(n, k, "trace_k_minors");
  double count = binomial(n, k);
  if (count > 1e6) {
    throw ResourceError("trace_k_minors: C(" + std::to_string(n) + "," +
                        std::to_string(k) +
                        ") exceeds 1e6; use trace_k_eigen");
  }
  CompensatedSum re, im;
  CompensatedSum re_abs;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  CMatrix sub(k, k);
  do {
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) sub(r, c) = a(idx[r], idx[c]);
    }
    Complex det = k == 1 ? sub(0, 0) : sub.determinant();
    re.add(det.real());
    im.add(det.imag());
    re_abs.add(std::abs(det));
  } while (next_k_subset(idx, n));
  KTraceValue v;
  v.n = n;
  v.k = k;
  v.value = re.value();
  v.imag_residue = std::abs(im.value());
  v.cond_warning = re_abs.value() > 1e12 * std::abs(v.value);
  return v;
}

KTraceValue trace_k_minors(const HermitianMatrix& a, int k) {
  return trace_k_minors(a.mat(), k);
}

KTraceValue trace_k_charpoly(const CMatrix& a, int k) {
  int n = int(a.rows());
  if (a.rows() != a.cols()) {
    throw ArgumentError("trace_k_charpoly: square input");
  }
  check_order(n, k, "trace_k_charpoly");
  // Faddeev-LeVerrier: M_1 = A, c_j = -tr(A M_{j-1} + c_{j-1} A)/j applied
  // iteratively; e_j = (-1)^j c_j.
  CMatrix m = a;
  Complex c_prev = -m.trace();
  double max_mag = std::abs(c_prev);
  Complex e_k = (k == 1) ? -c_prev : Complex(0, 0);
  for (int j = 2; j <= k; ++j) {
    m = a * (m + c_prev * CMatrix::Identity(n, n));
    Complex c_j = -m.trace() / double(j);
    max_mag = std::max(max_mag, std::abs(c_j));
    if (j == k) e_k = (k % 2 == 0) ? c_j : -c_j;
    c_prev = c_j;
  }
  KTraceValue v;
  v.n = n;
  v.k = k;
  v.value = e_k.real();
  v.imag_residue = std::abs(e_k.imag());
  v.cond_warning = std::abs(e_k) < 1e-12 * max_mag;
  return v;
}

double check_cyclic(const CMatrix& a, const CMatrix& b, int k) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw ArgumentError("check_cyclic: conformable square matrices required");
  }
  CMatrix ab = a * b;
  CMatrix ba = b * a;
  KTraceValue x = trace_k_charpoly(ab, k);
  KTraceValue y = trace_k_charpoly(ba, k);
  return std::abs(x.value - y.value);
}

KTraceBrackets ktrace_brackets(const HermitianMatrix& a_psd, int k) {
  int n = a_psd.dim();
  check_order(n, k, "ktrace_brackets");
  ConeTag tag = classify_cone(a_psd);
  if (tag.classification == Cone::indefinite) {
    throw DomainError("ktrace_brackets: input is not PSD (lambda_min = " +
                      std::to_string(tag.lambda_min) + ")");
  }
  SpectralDecomposition d = decompose(a_psd);
  double prod = 1.0;
  for (int i = 0; i < k; ++i) {
    prod *= std::max(d.eigenvalues[i], 0.0);
  }
  std::vector<double> e = elementary_symmetric(d.eigenvalues);
  KTraceBrackets out;
  out.lower = prod;
  out.upper = binomial(n, k) * prod;
  out.value = e[k];
  double tol = 1e-10 * std::max(out.upper, 1.0);
  if (out.value < out.lower - tol || out.value > out.upper + tol) {
    throw SolverError("ktrace_brackets: containment violated numerically");
  }
  return out;
}

double log_elementary_symmetric_exp(const RVector& mu, int k) {
  int n = int(mu.size());
  check_order(n, k, "log_elementary_symmetric_exp");
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> l(k + 1, ninf);
  l[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    int top = std::min(i + 1, k);
    for (int j = top; j >= 1; --j) {
      l[j] = logaddexp(l[j], mu[i] + l[j - 1]);
    }
  }
  return l[k];
}

double log_trace_k_exp(const HermitianMatrix& s, int k) {
  SpectralDecomposition d = decompose(s);
  return log_elementary_symmetric_exp(d.eigenvalues, k);
}

}  // namespace ktrace
