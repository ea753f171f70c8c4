#pragma once

#include <functional>

#include "ktrace/common.hpp"

namespace ktrace {

// Dense Hermitian matrix. Construction symmetrizes (M + M*)/2 and rejects
// inputs whose anti-Hermitian part exceeds 1e-10 * ||M||_F.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMatrix& m, double tol_scale = 1e-10);

  static HermitianMatrix identity(int n);
  static HermitianMatrix zero(int n);
  static HermitianMatrix diagonal(const RVector& d);

  int dim() const { return int(m_.rows()); }
  const CMatrix& mat() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }
  double norm() const { return m_.norm(); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix scaled(double c) const;

 private:
  struct Trusted {};
  HermitianMatrix(CMatrix m, Trusted) : m_(std::move(m)) {}
  CMatrix m_;
  friend HermitianMatrix hermitian_unchecked(CMatrix m);
};

// Wraps a matrix already known to be Hermitian, skipping the symmetry check.
HermitianMatrix hermitian_unchecked(CMatrix m);

struct SpectralDecomposition {
  RVector eigenvalues;  // descending
  CMatrix eigenvectors; // column i pairs with eigenvalues[i]
  CMatrix reconstruct() const;
};

// Full eigendecomposition; postconditions checked: unitarity of the
// eigenvector matrix and reconstruction error, both at 1e-12 relative.
SpectralDecomposition decompose(const HermitianMatrix& a);

enum class Cone { positive_definite, positive_semidefinite, indefinite };

struct ConeTag {
  Cone classification;
  double lambda_min;
  double lambda_max;
  double tol;
};

ConeTag classify_cone(const HermitianMatrix& a, double tol_scale = 1e-12);

const char* cone_name(Cone c);

// Spectral functional calculus: f applied to the eigenvalues.
HermitianMatrix matrix_fn(const HermitianMatrix& a,
                          const std::function<double(double)>& f);
HermitianMatrix matrix_exp(const HermitianMatrix& a);
// Requires PD input.
HermitianMatrix matrix_log(const HermitianMatrix& a);
// Requires PSD input; eigenvalues in [-tol, 0) are clipped to zero first.
HermitianMatrix matrix_pow(const HermitianMatrix& a, double s);
HermitianMatrix matrix_inverse(const HermitianMatrix& a_pd);

// Scalar divided differences with cancellation-safe branches.
// (ln a - ln b) / (a - b), continued as 1/a on the diagonal.
double log_divided_difference(double a, double b);
// Second-order divided difference of ln at three positive points.
double log_second_divided_difference(double x0, double x1, double x2);
// Integral of ((a+t)(b+t)(c+t))^-1 over [0, inf); equals minus the second
// divided difference of ln.
double resolvent_triple_integral(double a, double b, double c);
// (e^a - e^b) / (a - b), continued as e^a on the diagonal.
double exp_divided_difference(double a, double b);

// T = integral of (A+tI)^-1 C (A+tI)^-1 dt over [0, inf): the derivative of
// the matrix logarithm at A in direction C. Closed form in the eigenbasis.
HermitianMatrix t_operator(const HermitianMatrix& a_pd,
                           const HermitianMatrix& c);

// R = 2 * integral of (A+tI)^-1 C (A+tI)^-1 C (A+tI)^-1 dt: minus the
// derivative of T along A(t) with A'(t) = C. Closed form in the eigenbasis.
HermitianMatrix r_operator(const HermitianMatrix& a_pd,
                           const HermitianMatrix& c);

// The same two operators by adaptive quadrature on the compactified ray
// t = (1-u)/u, u in (0, 1]. Independent route kept for cross-validation.
HermitianMatrix t_operator_quadrature(const HermitianMatrix& a_pd,
                                      const HermitianMatrix& c,
                                      double rel_tol = 1e-9);
HermitianMatrix r_operator_quadrature(const HermitianMatrix& a_pd,
                                      const HermitianMatrix& c,
                                      double rel_tol = 1e-9);

// Derivative of exp at A in direction Adot: integral over s in [0, 1] of
// exp(sA) Adot exp((1-s)A); divided-difference form in the eigenbasis.
HermitianMatrix exp_derivative(const HermitianMatrix& a,
                               const HermitianMatrix& adot);

// Derivative of the inverse: -A^-1 Adot A^-1.
HermitianMatrix inverse_derivative(const HermitianMatrix& a_pd,
                                   const HermitianMatrix& adot);

}  // namespace ktrace
