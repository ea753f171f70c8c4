#include "ktrace/concavity.hpp"

#include <cmath>

#include "ktrace/errors.hpp"
#include "ktrace/ktrace.hpp"
#include "ktrace/quadrature.hpp"
#include "ktrace/wedge.hpp"

namespace ktrace {

namespace {

void check_spec(const ObjectiveSpec& spec, int n) {
  if (spec.h.dim() != n) {
    throw ArgumentError("objective: H and A dimension mismatch");
  }
  if (spec.k < 1 || spec.k > n) {
    throw ArgumentError("objective: order k outside [1, n]");
  }
}

double log_objective(const ObjectiveSpec& spec, const HermitianMatrix& a_pd) {
  HermitianMatrix s = spec.h + matrix_log(a_pd);
  return log_trace_k_exp(s, spec.k);
}

}  // namespace

double objective(const ObjectiveSpec& spec, const HermitianMatrix& a_pd) {
  check_spec(spec, a_pd.dim());
  double lv = log_objective(spec, a_pd);
  return spec.form == ObjectiveForm::root ? std::exp(lv / spec.k) : lv;
}

ChordCertificate chord_gap(const ObjectiveSpec& spec, const HermitianMatrix& a1,
                           const HermitianMatrix& a2, double tau) {
  if (tau < 0.0 || tau > 1.0) {
    throw ArgumentError("chord_gap: tau outside [0, 1]");
  }
  HermitianMatrix mix = a1.scaled(tau) + a2.scaled(1.0 - tau);
  ChordCertificate cert{a1, a2, tau, 0.0, 0.0, 0.0};
  cert.lhs = objective(spec, mix);
  cert.rhs = tau * objective(spec, a1) + (1.0 - tau) * objective(spec, a2);
  cert.gap = cert.lhs - cert.rhs;
  return cert;
}

double second_directional_derivative(const ObjectiveSpec& spec,
                                     const HermitianMatrix& a,
                                     const HermitianMatrix& c, double h) {
  if (h <= 0.0) {
    throw ArgumentError("second_directional_derivative: step must be > 0");
  }
  HermitianMatrix up = a + c.scaled(h);
  HermitianMatrix down = a - c.scaled(h);
  if (classify_cone(up).classification != Cone::positive_definite ||
      classify_cone(down).classification != Cone::positive_definite) {
    throw DomainError("second_directional_derivative: A +/- hC left the PD "
                      "cone; reduce the step");
  }
  double f0 = objective(spec, a);
  double fp = objective(spec, up);
  double fm = objective(spec, down);
  return (fp - 2.0 * f0 + fm) / (h * h);
}

double lieb_lemma_gap(const HermitianMatrix& a_pd, const HermitianMatrix& c,
                      const HermitianMatrix& b_psd) {
  int n = a_pd.dim();
  if (c.dim() != n || b_psd.dim() != n) {
    throw ArgumentError("lieb_lemma_gap: dimension mismatch");
  }
  ConeTag btag = classify_cone(b_psd);
  if (btag.classification == Cone::indefinite) {
    throw DomainError("lieb_lemma_gap: B must be PSD");
  }
  HermitianMatrix t = t_operator(a_pd, c);
  HermitianMatrix r = r_operator(a_pd, c);

  SpectralDecomposition bd = decompose(b_psd);
  RVector b = bd.eigenvalues;
  for (int i = 0; i < n; ++i) b[i] = std::max(b[i], 0.0);
  CMatrix tb = bd.eigenvectors.adjoint() * t.mat() * bd.eigenvectors;
  RMatrix t2(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) t2(i, j) = std::norm(tb(i, j));
  }
  double lhs = integrate_unit_doubling([&](double s) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      double bi = std::pow(b[i], 1.0 - s);
      for (int j = 0; j < n; ++j) {
        acc += t2(i, j) * std::pow(b[j], s) * bi;
      }
    }
    return acc;
  });
  double rhs = (r.mat() * b_psd.mat()).trace().real();
  return lhs - rhs;
}

double trace_ineq_gap(const HermitianMatrix& a_pd, const HermitianMatrix& b_psd,
                      const HermitianMatrix& c, int k) {
  int n = a_pd.dim();
  if (c.dim() != n || b_psd.dim() != n) {
    throw ArgumentError("trace_ineq_gap: dimension mismatch");
  }
  if (classify_cone(b_psd).classification == Cone::indefinite) {
    throw DomainError("trace_ineq_gap: B must be PSD");
  }
  SubsetBasis basis(n, k);
  HermitianMatrix t = t_operator(a_pd, c);
  HermitianMatrix r = r_operator(a_pd, c);

  SpectralDecomposition bd = decompose(b_psd);
  RVector b = bd.eigenvalues;
  for (int i = 0; i < n; ++i) b[i] = std::max(b[i], 0.0);
  auto b_pow = [&](double s) -> CMatrix {
    RVector bs(n);
    for (int i = 0; i < n; ++i) bs[i] = std::pow(b[i], s);
    return bd.eigenvectors * bs.cast<Complex>().asDiagonal() *
           bd.eigenvectors.adjoint();
  };

  const CMatrix& tm = t.mat();
  CMatrix bm = b_pow(1.0);
  double integral = integrate_unit_doubling([&](double s) {
    CMatrix bs = b_pow(s);
    CMatrix b1s = b_pow(1.0 - s);
    WedgeOperator lhs1 = m1(tm * bs, bs, basis);
    WedgeOperator lhs2 = m1(tm * b1s, b1s, basis);
    return wedge_trace(lhs1 * lhs2).real();
  });
  double mid = wedge_trace(m1(r.mat() * bm, bm, basis)).real();
  double rhs = wedge_trace(m2(tm * bm, tm * bm, bm, basis)).real();
  return integral - mid - rhs;
}

double jensen_multiconcave_gap(const std::vector<FiniteSupportMatrix>& summands,
                               int k, ObjectiveForm form) {
  if (summands.empty()) {
    throw ArgumentError("jensen_multiconcave_gap: no summands");
  }
  int n = summands.front().dim();
  for (const auto& s : summands) {
    if (s.atoms.empty() || s.dim() != n) {
      throw ArgumentError("jensen_multiconcave_gap: inconsistent summands");
    }
    for (const auto& atom : s.atoms) {
      if (classify_cone(atom.matrix).classification !=
          Cone::positive_definite) {
        throw DomainError("jensen_multiconcave_gap: atoms must be PD");
      }
    }
  }
  if (joint_support_size(summands, 100000) > 100000) {
    throw ResourceError("jensen_multiconcave_gap: joint support exceeds 1e5");
  }

  auto g_of_sum_logs = [&](const CMatrix& sum_logs) {
    double lv = log_trace_k_exp(hermitian_unchecked(sum_logs), k);
    return form == ObjectiveForm::root ? std::exp(lv / k) : lv;
  };

  int m = int(summands.size());
  std::vector<std::vector<CMatrix>> logs(m);
  for (int i = 0; i < m; ++i) {
    for (const auto& atom : summands[i].atoms) {
      logs[i].push_back(matrix_log(atom.matrix).mat());
    }
  }
  CompensatedSum lhs_acc;
  for_each_joint_atom(summands, [&](double p, const std::vector<int>& idx) {
    CMatrix s = CMatrix::Zero(n, n);
    for (int i = 0; i < m; ++i) s += logs[i][idx[i]];
    lhs_acc.add(p * g_of_sum_logs((s + s.adjoint()) / 2.0));
  });
  double lhs = lhs_acc.value();

  CMatrix sum_log_means = CMatrix::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    sum_log_means += matrix_log(summands[i].mean()).mat();
  }
  double rhs = g_of_sum_logs((sum_log_means + sum_log_means.adjoint()) / 2.0);
  return rhs - lhs;
}

double homogeneity_check(const ObjectiveSpec& spec, const HermitianMatrix& a,
                         double c) {
  if (c <= 0.0) throw ArgumentError("homogeneity_check: c must be positive");
  if (spec.form == ObjectiveForm::root) {
    double f_ca = objective(spec, a.scaled(c));
    double f_a = objective(spec, a);
    return std::abs(f_ca - c * f_a);
  }
  double shift = objective(spec, a.scaled(c)) - objective(spec, a);
  return std::abs(shift - spec.k * std::log(c)) / spec.k;
}

double scalar_holder_gap(double a, double b, double c, double d, double s) {
  if (a < 0 || b < 0 || c < 0 || d < 0) {
    throw ArgumentError("scalar_holder_gap: inputs must be nonnegative");
  }
  if (s < 0.0 || s > 1.0) {
    throw ArgumentError("scalar_holder_gap: s outside [0, 1]");
  }
  return std::pow(a + b, s) * std::pow(c + d, 1.0 - s) -
         std::pow(a, s) * std::pow(c, 1.0 - s) -
         std::pow(b, s) * std::pow(d, 1.0 - s);
}

}  // namespace ktrace
