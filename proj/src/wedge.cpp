#include "ktrace/wedge.hpp"

#include <algorithm>
#include <numeric>

#include "ktrace/errors.hpp"
#include "ktrace/ktrace.hpp"

namespace ktrace {

SubsetBasis::SubsetBasis(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 1 || k > n) {
    throw ArgumentError("SubsetBasis: need 1 <= k <= n, got n = " +
                        std::to_string(n) + ", k = " + std::to_string(k));
  }
  if (n > 12 || k > 8) {
    throw ResourceError("SubsetBasis: guardrail n <= 12, k <= 8 exceeded");
  }
  subsets_ = k_subsets(n, k);
  mask_to_index_.assign(std::size_t(1) << n, -1);
  for (int i = 0; i < int(subsets_.size()); ++i) {
    unsigned mask = 0;
    for (int v : subsets_[i]) mask |= 1u << v;
    mask_to_index_[mask] = i;
  }
}

int SubsetBasis::index_of(const std::vector<int>& sorted_subset) const {
  unsigned mask = 0;
  for (int v : sorted_subset) {
    if (v < 0 || v >= n_) return -1;
    mask |= 1u << v;
  }
  return mask_to_index_[mask];
}

WedgeOperator::WedgeOperator(SubsetBasis basis, CMatrix entries)
    : basis_(std::move(basis)), entries_(std::move(entries)) {
  if (entries_.rows() != basis_.size() || entries_.cols() != basis_.size()) {
    throw ArgumentError("WedgeOperator: entries must be C(n,k) square");
  }
}

namespace {

void check_space(const WedgeOperator& a, const WedgeOperator& b,
                 const char* who) {
  if (!a.basis().same_space(b.basis())) {
    throw ArgumentError(std::string(who) +
                        ": operators live on different exterior powers");
  }
}

}  // namespace

WedgeOperator WedgeOperator::operator+(const WedgeOperator& o) const {
  check_space(*this, o, "WedgeOperator::operator+");
  return WedgeOperator(basis_, entries_ + o.entries_);
}

WedgeOperator WedgeOperator::operator-(const WedgeOperator& o) const {
  check_space(*this, o, "WedgeOperator::operator-");
  return WedgeOperator(basis_, entries_ - o.entries_);
}

WedgeOperator WedgeOperator::operator*(const WedgeOperator& o) const {
  check_space(*this, o, "WedgeOperator::operator*");
  return WedgeOperator(basis_, entries_ * o.entries_);
}

WedgeOperator WedgeOperator::scaled(Complex c) const {
  return WedgeOperator(basis_, CMatrix(c * entries_));
}

WedgeOperator WedgeOperator::adjoint() const {
  return WedgeOperator(basis_, entries_.adjoint());
}

WedgeOperator wedge_identity(const SubsetBasis& basis) {
  return WedgeOperator(basis,
                       CMatrix::Identity(basis.size(), basis.size()));
}

namespace {

void check_ambient(const CMatrix& a, const SubsetBasis& basis,
                   const char* who) {
  if (a.rows() != basis.n() || a.cols() != basis.n()) {
    throw ArgumentError(std::string(who) + ": matrix is " +
                        std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + ", basis ambient dim " +
                        std::to_string(basis.n()));
  }
}

// Adds to `entries` the operator sending e_T to (M_1 e_{t_1}) ^ ... ^
// (M_k e_{t_k}) for the given slot assignment.
void accumulate_assignment(CMatrix& entries,
                           const std::vector<const CMatrix*>& slots,
                           const SubsetBasis& basis) {
  int k = basis.k();
  int m = basis.size();
  int n = basis.n();
  CMatrix w(n, k);
  CMatrix sub(k, k);
  for (int t = 0; t < m; ++t) {
    const auto& tset = basis.subset(t);
    for (int j = 0; j < k; ++j) w.col(j) = slots[j]->col(tset[j]);
    for (int s = 0; s < m; ++s) {
      const auto& sset = basis.subset(s);
      for (int r = 0; r < k; ++r) {
        for (int j = 0; j < k; ++j) sub(r, j) = w(sset[r], j);
      }
      entries(s, t) += k == 1 ? sub(0, 0) : Complex(sub.determinant());
    }
  }
}

}  // namespace

WedgeOperator mixed_operator(const std::vector<CMatrix>& as,
                             const SubsetBasis& basis) {
  int k = basis.k();
  if (int(as.size()) != k) {
    throw ArgumentError("mixed_operator: expected " + std::to_string(k) +
                        " matrices, got " + std::to_string(as.size()));
  }
  for (const auto& a : as) check_ambient(a, basis, "mixed_operator");
  CMatrix entries = CMatrix::Zero(basis.size(), basis.size());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<const CMatrix*> slots(k);
  do {
    for (int j = 0; j < k; ++j) slots[j] = &as[perm[j]];
    accumulate_assignment(entries, slots, basis);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return WedgeOperator(basis, std::move(entries));
}

WedgeOperator m0(const CMatrix& a, const SubsetBasis& basis) {
  check_ambient(a, basis, "m0");
  CMatrix entries = CMatrix::Zero(basis.size(), basis.size());
  std::vector<const CMatrix*> slots(basis.k(), &a);
  accumulate_assignment(entries, slots, basis);
  return WedgeOperator(basis, std::move(entries));
}

WedgeOperator m1(const CMatrix& a, const CMatrix& b,
                 const SubsetBasis& basis) {
  check_ambient(a, basis, "m1");
  check_ambient(b, basis, "m1");
  int k = basis.k();
  CMatrix entries = CMatrix::Zero(basis.size(), basis.size());
  std::vector<const CMatrix*> slots(k, &b);
  for (int j = 0; j < k; ++j) {
    slots[j] = &a;
    accumulate_assignment(entries, slots, basis);
    slots[j] = &b;
  }
  return WedgeOperator(basis, std::move(entries));
}

WedgeOperator m2(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                 const SubsetBasis& basis) {
  check_ambient(a, basis, "m2");
  check_ambient(b, basis, "m2");
  check_ambient(c, basis, "m2");
  int k = basis.k();
  CMatrix entries = CMatrix::Zero(basis.size(), basis.size());
  std::vector<const CMatrix*> slots(k, &c);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      slots[i] = &a;
      slots[j] = &b;
      accumulate_assignment(entries, slots, basis);
      slots[i] = &c;
      slots[j] = &c;
    }
  }
  return WedgeOperator(basis, std::move(entries));
}

Complex wedge_trace(const WedgeOperator& f) { return f.entries().trace(); }

SymmetricForms symmetric_forms(const RVector& lambdas, int k) {
  if (k < 1) throw ArgumentError("symmetric_forms: k >= 1 required");
  int n = int(lambdas.size());
  SymmetricForms out;
  out.lambdas = lambdas;
  out.k = k;
  out.d = RVector::Zero(n);
  out.g = RMatrix::Zero(n, n);
  if (k > n) {
    out.p = 0.0;
    return out;
  }
  out.p = elementary_symmetric(lambdas)[k];
  RVector drop1(n - 1);
  for (int i = 0; i < n; ++i) {
    int w = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) drop1[w++] = lambdas[j];
    }
    out.d[i] = elementary_symmetric(drop1)[k - 1];
  }
  if (k >= 2 && n >= 2) {
    RVector drop2(n - 2);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        int w = 0;
        for (int l = 0; l < n; ++l) {
          if (l != i && l != j) drop2[w++] = lambdas[l];
        }
        double g = elementary_symmetric(drop2)[k - 2];
        out.g(i, j) = g;
        out.g(j, i) = g;
      }
    }
  }
  return out;
}

IdentityGaps verify_identities(const CMatrix& a, const CMatrix& b,
                               const RVector& lambdas, int k) {
  int n = int(lambdas.size());
  if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n) {
    throw ArgumentError("verify_identities: dimension mismatch");
  }
  SubsetBasis basis(n, k);
  CMatrix diag = lambdas.cast<Complex>().asDiagonal();
  SymmetricForms forms = symmetric_forms(lambdas, k);

  IdentityGaps gaps;
  gaps.p_gap = std::abs(wedge_trace(m0(diag, basis)) - forms.p);

  Complex rhs_d(0, 0);
  for (int i = 0; i < n; ++i) rhs_d += a(i, i) * forms.d[i];
  gaps.d_gap = std::abs(wedge_trace(m1(a, diag, basis)) - rhs_d);

  Complex rhs_g(0, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rhs_g += (a(i, i) * b(j, j) - a(j, i) * b(i, j)) * forms.g(i, j);
    }
  }
  gaps.g_gap = std::abs(wedge_trace(m2(a, b, diag, basis)) - rhs_g);
  return gaps;
}

namespace {

double relative_gap(const WedgeOperator& lhs, const WedgeOperator& rhs) {
  double scale = std::max({lhs.norm(), rhs.norm(), 1.0});
  return (lhs - rhs).norm() / scale;
}

}  // namespace

WedgePropertyGaps verify_product_derivative_properties(
    const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d,
    const SubsetBasis& basis, double fd_step) {
  WedgePropertyGaps gaps;
  gaps.product[0] = relative_gap(m0(a * b, basis), m0(a, basis) * m0(b, basis));
  gaps.product[1] =
      relative_gap(m1(a, b, basis) * m0(c, basis), m1(a * c, b * c, basis));
  gaps.product[2] =
      relative_gap(m0(c, basis) * m1(a, b, basis), m1(c * a, c * b, basis));
  gaps.product[3] =
      relative_gap(m1(a, c, basis) * m1(b, d, basis),
                   m2(a * d, c * b, c * d, basis) + m1(a * b, c * d, basis));

  double h = fd_step;
  WedgeOperator fd0 =
      (m0(a + h * c, basis) - m0(a - h * c, basis)).scaled(0.5 / h);
  gaps.derivative[0] = relative_gap(fd0, m1(c, a, basis));

  WedgeOperator fd1 =
      (m1(a + h * c, b + h * d, basis) - m1(a - h * c, b - h * d, basis))
          .scaled(0.5 / h);
  gaps.derivative[1] =
      relative_gap(fd1, m1(c, b, basis) + m2(a, d, b, basis));
  return gaps;
}

}  // namespace ktrace
