#pragma once

#include <functional>

#include "ktrace/common.hpp"

namespace ktrace {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int segments = 0;
};

// Adaptive Gauss-Kronrod 7-15 on a finite interval. Splits the segment with
// the largest error estimate until the global estimate meets
// max(abs_tol, rel_tol * |value|). Throws SolverError if max_segments splits
// are not enough.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double rel_tol = 1e-10,
                                    double abs_tol = 0.0,
                                    int max_segments = 512);

// Same scheme for matrix-valued integrands; error is measured in Frobenius
// norm.
CMatrix integrate_adaptive_matrix(const std::function<CMatrix(double)>& f,
                                  double a, double b, double rel_tol = 1e-10,
                                  double abs_tol = 0.0, int max_segments = 512);

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

// Nodes by Newton iteration on the Legendre recurrence; results cached per n.
const GaussLegendreRule& gauss_legendre_unit(int n);

// Integrates a smooth function over [0, 1] with Gauss-Legendre rules of
// 32, 64, 128, 256 points, stopping when successive values agree to rel_tol.
double integrate_unit_doubling(const std::function<double(double)>& f,
                               double rel_tol = 1e-10);

}  // namespace ktrace
