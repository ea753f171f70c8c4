#pragma once

#include "ktrace/finite_support.hpp"
#include "ktrace/hermitian.hpp"

namespace ktrace {

enum class ObjectiveForm { root, log };

// The map under test: A -> (trace_k[exp(H + ln A)])^(1/k), or its logarithm.
struct ObjectiveSpec {
  HermitianMatrix h;
  int k;
  ObjectiveForm form;
};

// Evaluates the objective at a PD point. The k-trace of the exponential is
// computed in log space, so large ||H|| does not overflow.
double objective(const ObjectiveSpec& spec, const HermitianMatrix& a_pd);

struct ChordCertificate {
  HermitianMatrix a1;
  HermitianMatrix a2;
  double tau;
  double lhs;   // f(tau A1 + (1-tau) A2)
  double rhs;   // tau f(A1) + (1-tau) f(A2)
  double gap;   // lhs - rhs, >= 0 when concavity holds
};

ChordCertificate chord_gap(const ObjectiveSpec& spec, const HermitianMatrix& a1,
                           const HermitianMatrix& a2, double tau);

// Central second difference (f(A+hC) - 2 f(A) + f(A-hC)) / h^2; concavity
// makes it nonpositive up to discretization error.
double second_directional_derivative(const ObjectiveSpec& spec,
                                     const HermitianMatrix& a,
                                     const HermitianMatrix& c, double h);

// Integral form of Lieb's inequality at the test point:
// integral_0^1 trace[T B^s T B^(1-s)] ds - trace[R B], expected <= 0,
// with T, R the first and second log-derivative operators at (A, C).
double lieb_lemma_gap(const HermitianMatrix& a_pd, const HermitianMatrix& c,
                      const HermitianMatrix& b_psd);

// Wedge-operator generalization; reduces to lieb_lemma_gap at k = 1:
// integral trace[m1(T B^s; B^s) m1(T B^(1-s); B^(1-s))] ds
//   - trace[m1(R B; B)] - trace[m2(T B, T B; B)], expected <= 0.
double trace_ineq_gap(const HermitianMatrix& a_pd, const HermitianMatrix& b_psd,
                      const HermitianMatrix& c, int k);

// Jensen gap for the multivariate concave composition: returns
// g(exp sum ln E A_i) - E g(exp sum ln A_i), exact exhaustive expectation
// over the joint support (cap 1e5 atoms). Expected >= 0.
double jensen_multiconcave_gap(const std::vector<FiniteSupportMatrix>& summands,
                               int k, ObjectiveForm form);

// |f(cA) - c f(A)| (root form); log form measures the additive shift against
// k ln c and rescales by 1/k.
double homogeneity_check(const ObjectiveSpec& spec, const HermitianMatrix& a,
                         double c);

// (a+b)^s (c+d)^(1-s) - a^s c^(1-s) - b^s d^(1-s), expected >= 0.
double scalar_holder_gap(double a, double b, double c, double d, double s);

}  // namespace ktrace
