#include "ktrace/random.hpp"

#include <Eigen/Eigenvalues>

namespace ktrace {

CMatrix gaussian_matrix(Rng& rng, int rows, int cols) {
  CMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
  }
  return g;
}

CMatrix random_pd(Rng& rng, int n) {
  CMatrix g = gaussian_matrix(rng, n, n);
  CMatrix a = g * g.adjoint();
  a += 1e-3 * CMatrix::Identity(n, n);
  return (a + a.adjoint()) / 2.0;
}

CMatrix random_hermitian(Rng& rng, int n) {
  CMatrix g = gaussian_matrix(rng, n, n);
  return (CMatrix)((g + g.adjoint()) / 2.0);
}

CMatrix random_hermitian_unit(Rng& rng, int n) {
  CMatrix h = random_hermitian(rng, n);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  if (rho > 0) h /= rho;
  return h;
}

CMatrix random_psd_rank_deficient(Rng& rng, int n, int zeros) {
  CMatrix g = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  RVector lam(n);
  for (int i = 0; i < n; ++i) {
    lam[i] = (i < n - zeros) ? std::exp(rng.gaussian()) : 0.0;
  }
  CMatrix a = q * lam.cast<Complex>().asDiagonal() * q.adjoint();
  return (a + a.adjoint()) / 2.0;
}

}  // namespace ktrace
