#include "ktrace/hermitian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "ktrace/errors.hpp"
#include "ktrace/quadrature.hpp"

namespace ktrace {

HermitianMatrix::HermitianMatrix(const CMatrix& m, double tol_scale) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ArgumentError("HermitianMatrix: square nonempty matrix required");
  }
  double asym = (m - m.adjoint()).norm();
  if (asym > tol_scale * std::max(m.norm(), 1e-300)) {
    throw DomainError("HermitianMatrix: anti-Hermitian part " +
                      std::to_string(asym) + " exceeds tolerance");
  }
  m_ = (m + m.adjoint()) / 2.0;
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return hermitian_unchecked(CMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::zero(int n) {
  return hermitian_unchecked(CMatrix::Zero(n, n));
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
  return hermitian_unchecked(d.cast<Complex>().asDiagonal());
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return hermitian_unchecked(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return hermitian_unchecked(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::scaled(double c) const {
  return hermitian_unchecked(c * m_);
}

HermitianMatrix hermitian_unchecked(CMatrix m) {
  return HermitianMatrix(std::move(m), HermitianMatrix::Trusted{});
}

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() *
         eigenvectors.adjoint();
}

SpectralDecomposition decompose(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.mat());
  if (es.info() != Eigen::Success) {
    throw SolverError("decompose: eigensolver did not converge");
  }
  int n = a.dim();
  SpectralDecomposition d;
  d.eigenvalues = es.eigenvalues().reverse();
  d.eigenvectors = es.eigenvectors().rowwise().reverse();
  double scale = std::max(a.norm(), 1e-300);
  double recon = (d.reconstruct() - a.mat()).norm();
  if (recon > 1e-12 * std::max(scale, 1.0)) {
    throw SolverError("decompose: reconstruction error " +
                      std::to_string(recon / scale) + " relative");
  }
  double unit = (d.eigenvectors.adjoint() * d.eigenvectors -
                 CMatrix::Identity(n, n))
                    .norm();
  if (unit > 1e-12 * n) {
    throw SolverError("decompose: eigenvector matrix not unitary");
  }
  return d;
}

ConeTag classify_cone(const HermitianMatrix& a, double tol_scale) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw SolverError("classify_cone: eigensolver did not converge");
  }
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  // A negative lambda_max would produce a negative tolerance; clamp at zero
  // so negative-definite matrices land in "indefinite" (outside the cone).
  double tol = tol_scale * std::max(hi, 0.0);
  ConeTag tag;
  tag.lambda_min = lo;
  tag.lambda_max = hi;
  tag.tol = tol;
  if (lo > tol) {
    tag.classification = Cone::positive_definite;
  } else if (lo >= -tol) {
    tag.classification = Cone::positive_semidefinite;
  } else {
    tag.classification = Cone::indefinite;
  }
  return tag;
}

const char* cone_name(Cone c) {
  switch (c) {
    case Cone::positive_definite: return "positive_definite";
    case Cone::positive_semidefinite: return "positive_semidefinite";
    default: return "indefinite";
  }
}

HermitianMatrix matrix_fn(const HermitianMatrix& a,
                          const std::function<double(double)>& f) {
  SpectralDecomposition d = decompose(a);
  RVector fl(a.dim());
  for (int i = 0; i < a.dim(); ++i) fl[i] = f(d.eigenvalues[i]);
  CMatrix out = d.eigenvectors * fl.cast<Complex>().asDiagonal() *
                d.eigenvectors.adjoint();
  return hermitian_unchecked((out + out.adjoint()) / 2.0);
}

HermitianMatrix matrix_exp(const HermitianMatrix& a) {
  return matrix_fn(a, [](double x) { return std::exp(x); });
}

HermitianMatrix matrix_log(const HermitianMatrix& a) {
  ConeTag tag = classify_cone(a);
  if (tag.classification != Cone::positive_definite) {
    throw DomainError("matrix_log: matrix is not positive definite "
                      "(lambda_min = " + std::to_string(tag.lambda_min) + ")");
  }
  return matrix_fn(a, [](double x) { return std::log(x); });
}

HermitianMatrix matrix_pow(const HermitianMatrix& a, double s) {
  ConeTag tag = classify_cone(a);
  if (tag.classification == Cone::indefinite) {
    throw DomainError("matrix_pow: matrix is not positive semidefinite "
                      "(lambda_min = " + std::to_string(tag.lambda_min) + ")");
  }
  double floor_at = tag.tol;
  return matrix_fn(a, [s, floor_at](double x) {
    double xc = x < floor_at ? 0.0 : x;
    return std::pow(xc, s);
  });
}

HermitianMatrix matrix_inverse(const HermitianMatrix& a_pd) {
  ConeTag tag = classify_cone(a_pd);
  if (tag.classification != Cone::positive_definite) {
    throw DomainError("matrix_inverse: matrix is not positive definite");
  }
  return matrix_fn(a_pd, [](double x) { return 1.0 / x; });
}

double log_divided_difference(double a, double b) {
  if (a <= 0.0 || b <= 0.0) {
    throw DomainError("log_divided_difference: arguments must be positive");
  }
  if (a == b) return 1.0 / a;
  double m = 0.5 * (a + b);
  double h = (a - b) / (a + b);
  if (std::abs(a - b) < 1e-8 * std::max(a, b)) {
    double h2 = h * h;
    return (1.0 + h2 / 3.0 + h2 * h2 / 5.0) / m;
  }
  return std::atanh(h) / (h * m);
}

double log_second_divided_difference(double x0, double x1, double x2) {
  if (x0 <= 0.0 || x1 <= 0.0 || x2 <= 0.0) {
    throw DomainError(
        "log_second_divided_difference: arguments must be positive");
  }
  double lo = std::min({x0, x1, x2});
  double hi = std::max({x0, x1, x2});
  double mid = x0 + x1 + x2 - lo - hi;
  if (hi - lo < 1e-5 * hi) {
    // All three nearly coincide: series around the mean. With u_i centered
    // (sum zero) the expansion reduces to elementary symmetric terms.
    double m = (x0 + x1 + x2) / 3.0;
    double u0 = x0 - m, u1 = x1 - m, u2 = x2 - m;
    double e2 = u0 * u1 + u0 * u2 + u1 * u2;
    double e3 = u0 * u1 * u2;
    double m2 = m * m;
    double m4 = m2 * m2;
    return -0.5 / m2 + e2 / (4.0 * m4) + e3 / (5.0 * m4 * m) -
           e2 * e2 / (6.0 * m4 * m2);
  }
  if (hi == lo) return -0.5 / (lo * lo);
  // Outer pair maximally separated keeps the numerator cancellation mild.
  double f_lo_mid = log_divided_difference(lo, mid);
  double f_mid_hi = log_divided_difference(mid, hi);
  return (f_lo_mid - f_mid_hi) / (lo - hi);
}

double resolvent_triple_integral(double a, double b, double c) {
  return -log_second_divided_difference(a, b, c);
}

double exp_divided_difference(double a, double b) {
  if (a == b) return std::exp(a);
  double d = 0.5 * (a - b);
  double s = std::sinh(d) / d;
  return std::exp(0.5 * (a + b)) * s;
}

namespace {

void require_pd(const HermitianMatrix& a, const char* who) {
  ConeTag tag = classify_cone(a);
  if (tag.classification != Cone::positive_definite) {
    throw DomainError(std::string(who) + ": base point must be positive "
                      "definite (lambda_min = " +
                      std::to_string(tag.lambda_min) + ")");
  }
}

}  // namespace

HermitianMatrix t_operator(const HermitianMatrix& a_pd,
                           const HermitianMatrix& c) {
  require_pd(a_pd, "t_operator");
  if (c.dim() != a_pd.dim()) throw ArgumentError("t_operator: dim mismatch");
  SpectralDecomposition d = decompose(a_pd);
  int n = a_pd.dim();
  CMatrix cp = d.eigenvectors.adjoint() * c.mat() * d.eigenvectors;
  CMatrix tp(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      tp(i, j) =
          cp(i, j) * log_divided_difference(d.eigenvalues[i], d.eigenvalues[j]);
    }
  }
  CMatrix t = d.eigenvectors * tp * d.eigenvectors.adjoint();
  return hermitian_unchecked((t + t.adjoint()) / 2.0);
}

HermitianMatrix r_operator(const HermitianMatrix& a_pd,
                           const HermitianMatrix& c) {
  require_pd(a_pd, "r_operator");
  if (c.dim() != a_pd.dim()) throw ArgumentError("r_operator: dim mismatch");
  SpectralDecomposition d = decompose(a_pd);
  int n = a_pd.dim();
  CMatrix cp = d.eigenvectors.adjoint() * c.mat() * d.eigenvectors;
  CMatrix rp = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc(0, 0);
      for (int l = 0; l < n; ++l) {
        acc += cp(i, l) * cp(l, j) *
               resolvent_triple_integral(d.eigenvalues[i], d.eigenvalues[l],
                                         d.eigenvalues[j]);
      }
      rp(i, j) = 2.0 * acc;
    }
  }
  CMatrix r = d.eigenvectors * rp * d.eigenvectors.adjoint();
  return hermitian_unchecked((r + r.adjoint()) / 2.0);
}

namespace {

// Resolvent factory on the compactified ray: u in (0,1], t = (1-u)/u,
// dt = du/u^2.
CMatrix resolvent_at(const SpectralDecomposition& d, double t) {
  int n = int(d.eigenvalues.size());
  RVector inv(n);
  for (int i = 0; i < n; ++i) inv[i] = 1.0 / (d.eigenvalues[i] + t);
  return d.eigenvectors * inv.cast<Complex>().asDiagonal() *
         d.eigenvectors.adjoint();
}

}  // namespace

HermitianMatrix t_operator_quadrature(const HermitianMatrix& a_pd,
                                      const HermitianMatrix& c,
                                      double rel_tol) {
  require_pd(a_pd, "t_operator_quadrature");
  SpectralDecomposition d = decompose(a_pd);
  const CMatrix& cm = c.mat();
  CMatrix out = integrate_adaptive_matrix(
      [&](double u) -> CMatrix {
        double t = (1.0 - u) / u;
        CMatrix res = resolvent_at(d, t);
        return (res * cm * res) / (u * u);
      },
      0.0, 1.0, rel_tol);
  return hermitian_unchecked((out + out.adjoint()) / 2.0);
}

HermitianMatrix r_operator_quadrature(const HermitianMatrix& a_pd,
                                      const HermitianMatrix& c,
                                      double rel_tol) {
  require_pd(a_pd, "r_operator_quadrature");
  SpectralDecomposition d = decompose(a_pd);
  const CMatrix& cm = c.mat();
  CMatrix out = integrate_adaptive_matrix(
      [&](double u) -> CMatrix {
        double t = (1.0 - u) / u;
        CMatrix res = resolvent_at(d, t);
        return 2.0 * (res * cm * res * cm * res) / (u * u);
      },
      0.0, 1.0, rel_tol);
  return hermitian_unchecked((out + out.adjoint()) / 2.0);
}

HermitianMatrix exp_derivative(const HermitianMatrix& a,
                               const HermitianMatrix& adot) {
  if (a.dim() != adot.dim()) {
    throw ArgumentError("exp_derivative: dim mismatch");
  }
  SpectralDecomposition d = decompose(a);
  int n = a.dim();
  CMatrix ap = d.eigenvectors.adjoint() * adot.mat() * d.eigenvectors;
  CMatrix dp(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      dp(i, j) =
          ap(i, j) * exp_divided_difference(d.eigenvalues[i], d.eigenvalues[j]);
    }
  }
  CMatrix out = d.eigenvectors * dp * d.eigenvectors.adjoint();
  return hermitian_unchecked((out + out.adjoint()) / 2.0);
}

HermitianMatrix inverse_derivative(const HermitianMatrix& a_pd,
                                   const HermitianMatrix& adot) {
  HermitianMatrix inv = matrix_inverse(a_pd);
  CMatrix out = -inv.mat() * adot.mat() * inv.mat();
  return hermitian_unchecked((out + out.adjoint()) / 2.0);
}

}  // namespace ktrace
