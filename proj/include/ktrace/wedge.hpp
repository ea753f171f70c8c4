#pragma once

#include "ktrace/common.hpp"

namespace ktrace {

// Lexicographically ordered k-subsets of {0,...,n-1}, the index set for the
// natural basis of the k-th exterior power. Guardrails n <= 12, k <= 8 keep
// operator dimensions at desk scale (max C(12,6) = 924).
class SubsetBasis {
 public:
  SubsetBasis(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  int size() const { return int(subsets_.size()); }
  const std::vector<int>& subset(int idx) const { return subsets_[idx]; }
  const std::vector<std::vector<int>>& subsets() const { return subsets_; }
  int index_of(const std::vector<int>& sorted_subset) const;
  bool same_space(const SubsetBasis& o) const {
    return n_ == o.n_ && k_ == o.k_;
  }

 private:
  int n_, k_;
  std::vector<std::vector<int>> subsets_;
  std::vector<int> mask_to_index_;  // 2^n entries, -1 where not a k-subset
};

// Dense operator on the k-th exterior power, stored in the subset basis.
class WedgeOperator {
 public:
  WedgeOperator(SubsetBasis basis, CMatrix entries);

  const SubsetBasis& basis() const { return basis_; }
  const CMatrix& entries() const { return entries_; }
  int dim() const { return int(entries_.rows()); }

  WedgeOperator operator+(const WedgeOperator& o) const;
  WedgeOperator operator-(const WedgeOperator& o) const;
  WedgeOperator operator*(const WedgeOperator& o) const;
  WedgeOperator scaled(Complex c) const;
  WedgeOperator adjoint() const;
  double norm() const { return entries_.norm(); }

 private:
  SubsetBasis basis_;
  CMatrix entries_;
};

WedgeOperator wedge_identity(const SubsetBasis& basis);

// Full symmetrized operator: sum over permutations sigma of the slot
// assignment v_j -> A^{sigma(j)} v_j. k! enumeration.
WedgeOperator mixed_operator(const std::vector<CMatrix>& as,
                             const SubsetBasis& basis);

// The three normalized specializations. m0 is the k-th compound (entries are
// k x k minors); m1/m2 are built by direct slot-sum expansion, which also
// realizes the grade-edge conventions m1 at k=1 -> m0(A), m2 at k=1 -> 0,
// m2 at k=2 -> m1(A;B) without special cases.
WedgeOperator m0(const CMatrix& a, const SubsetBasis& basis);
WedgeOperator m1(const CMatrix& a, const CMatrix& b, const SubsetBasis& basis);
WedgeOperator m2(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                 const SubsetBasis& basis);

// Trace in the orthonormal subset basis.
Complex wedge_trace(const WedgeOperator& f);

struct SymmetricForms {
  RVector lambdas;
  int k = 0;
  double p = 0.0;   // e_k of all entries
  RVector d;        // d_i = e_{k-1} with entry i removed
  RMatrix g;        // g_ij = e_{k-2} with entries i and j removed; zero diag
};

SymmetricForms symmetric_forms(const RVector& lambdas, int k);

struct IdentityGaps {
  double p_gap = 0.0;  // trace m0(diag) vs p
  double d_gap = 0.0;  // trace m1(A; diag) vs sum A_ii d_i
  double g_gap = 0.0;  // trace m2(A, B; diag) vs sum (A_ii B_jj - A_ji B_ij) g_ij
};

IdentityGaps verify_identities(const CMatrix& a, const CMatrix& b,
                               const RVector& lambdas, int k);

struct WedgePropertyGaps {
  // m0(AB) = m0(A) m0(B);  m1(A;B) m0(C) = m1(AC;BC);
  // m0(C) m1(A;B) = m1(CA;CB);  m1(A;C) m1(B;D) = m2(AD,CB;CD) + m1(AB;CD).
  double product[4] = {0, 0, 0, 0};
  // d/dt m0(A+tC) = m1(C;A);  d/dt m1(A+tC;B+tD) = m1(C;B) + m2(A,D;B),
  // both at t = 0 against central finite differences.
  double derivative[2] = {0, 0};
};

// All gaps relative to max(||lhs||, ||rhs||, 1) in Frobenius norm. The
// differentiable paths are A(t) = A + tC and B(t) = B + tD.
WedgePropertyGaps verify_product_derivative_properties(
    const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d,
    const SubsetBasis& basis, double fd_step = 1e-5);

}  // namespace ktrace
