#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ktrace/errors.hpp"
#include "ktrace/hermitian.hpp"
#include "ktrace/ktrace.hpp"
#include "ktrace/random.hpp"
#include "ktrace/wedge.hpp"

using namespace ktrace;

TEST_CASE("subset basis enumeration and lookup") {
  SubsetBasis basis(4, 2);
  CHECK(basis.size() == 6);
  CHECK(basis.subset(0) == std::vector<int>{0, 1});
  CHECK(basis.subset(5) == std::vector<int>{2, 3});
  CHECK(basis.index_of({1, 3}) == 4);
  CHECK_THROWS_AS(SubsetBasis(13, 2), ResourceError);
  CHECK_THROWS_AS(SubsetBasis(12, 9), ResourceError);
}

TEST_CASE("slot-sum of identities is k! times the identity") {
  SubsetBasis basis(4, 3);
  std::vector<CMatrix> as(3, CMatrix::Identity(4, 4));
  auto op = mixed_operator(as, basis);
  CMatrix expect = 6.0 * CMatrix::Identity(basis.size(), basis.size());
  CHECK((op.entries() - expect).norm() < 1e-12);
}

TEST_CASE("two-slot diagonal case by hand") {
  SubsetBasis basis(2, 2);
  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 5.0;
  b(0, 0) = 7.0;
  b(1, 1) = 11.0;
  auto op = mixed_operator({a, b}, basis);
  REQUIRE(op.dim() == 1);
  // a1 b2 + a2 b1 = 3*11 + 5*7 = 68
  CHECK(op.entries()(0, 0).real() == doctest::Approx(68.0).epsilon(1e-14));
}

TEST_CASE("compound operator basics") {
  SubsetBasis basis(4, 2);
  auto id = m0(CMatrix::Identity(4, 4), basis);
  CHECK((id.entries() - CMatrix::Identity(6, 6)).norm() < 1e-14);

  Rng rng(31);
  CMatrix a = random_pd(rng, 4);
  auto lhs = m0(a, basis) * m0(a.inverse(), basis);
  CHECK((lhs.entries() - CMatrix::Identity(6, 6)).norm() < 1e-9);
}

TEST_CASE("compound trace recovers the k-trace") {
  Rng rng(32);
  for (int n = 2; n <= 6; ++n) {
    auto a = HermitianMatrix(random_hermitian(rng, n));
    for (int k = 1; k <= n; ++k) {
      SubsetBasis basis(n, k);
      Complex wt = wedge_trace(m0(a.mat(), basis));
      double ref = trace_k_eigen(a, k).value;
      CHECK(std::abs(wt.imag()) < 1e-10);
      CHECK(wt.real() ==
            doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("wedge trace of the identity counts the basis") {
  SubsetBasis basis(5, 2);
  CHECK(wedge_trace(wedge_identity(basis)).real() == doctest::Approx(10.0));
}

TEST_CASE("grade-edge conventions") {
  SubsetBasis b1(3, 1);
  Rng rng(33);
  CMatrix a = gaussian_matrix(rng, 3, 3);
  CMatrix b = gaussian_matrix(rng, 3, 3);
  CMatrix c = gaussian_matrix(rng, 3, 3);

  // one slot: the pair operator has no room and vanishes
  CHECK(m2(a, b, c, b1).norm() < 1e-14);
  // one slot: the single-swap operator is the matrix itself
  CHECK((m1(a, b, b1).entries() - a).norm() < 1e-13);

  // two slots: the pair operator coincides with a single swap
  SubsetBasis b2(3, 2);
  auto lhs = m2(a, b, c, b2);
  auto rhs = m1(a, b, b2);  // third argument c only fills remaining slots
  CHECK((lhs.entries() - rhs.entries()).norm() <=
        1e-12 * std::max(rhs.norm(), 1.0));
}

TEST_CASE("symmetric forms on (1,2,3)") {
  RVector lam(3);
  lam << 1, 2, 3;
  auto f = symmetric_forms(lam, 2);
  CHECK(f.p == doctest::Approx(11.0));
  // d_i = e_1 of the other two entries
  CHECK(f.d[0] == doctest::Approx(5.0));
  CHECK(f.d[1] == doctest::Approx(4.0));
  CHECK(f.d[2] == doctest::Approx(3.0));
  // g_ij = e_0 = 1 off the diagonal
  CHECK(f.g(0, 1) == doctest::Approx(1.0));
  CHECK(f.g(1, 2) == doctest::Approx(1.0));
  CHECK(f.g(0, 0) == 0.0);
}

TEST_CASE("symmetric forms edge orders") {
  RVector lam(3);
  lam << 2, 5, 7;
  // k above n: everything vanishes
  auto hi = symmetric_forms(lam, 4);
  CHECK(hi.p == 0.0);
  CHECK(hi.d.norm() == 0.0);
  CHECK(hi.g.norm() == 0.0);
  // k = 1: d is all ones, g is zero
  auto lo = symmetric_forms(lam, 1);
  CHECK(lo.p == doctest::Approx(14.0));
  for (int i = 0; i < 3; ++i) CHECK(lo.d[i] == 1.0);
  CHECK(lo.g.norm() == 0.0);
}

TEST_CASE("expansion relations between successive orders") {
  Rng rng(34);
  RVector lam(5);
  for (int i = 0; i < 5; ++i) lam[i] = rng.gaussian();
  for (int k = 1; k <= 4; ++k) {
    auto f = symmetric_forms(lam, k);
    auto f1 = symmetric_forms(lam, k + 1);
    for (int i = 0; i < 5; ++i) {
      // p = lambda_i d_i + (next order's d_i)
      CHECK(f.p == doctest::Approx(lam[i] * f.d[i] + f1.d[i]).epsilon(1e-11));
      for (int j = 0; j < 5; ++j) {
        if (i == j) continue;
        // d_i = lambda_j g_ij + (next order's g_ij)
        CHECK(f.d[i] ==
              doctest::Approx(lam[j] * f.g(i, j) + f1.g(i, j)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("diagonal trace identities") {
  Rng rng(35);
  for (int n = 2; n <= 5; ++n) {
    RVector lam(n);
    for (int i = 0; i < n; ++i) lam[i] = 1.5 * rng.gaussian();
    CMatrix a = gaussian_matrix(rng, n, n);
    CMatrix b = gaussian_matrix(rng, n, n);
    for (int k = 1; k <= n; ++k) {
      auto gaps = verify_identities(a, b, lam, k);
      CHECK(gaps.p_gap < 1e-9);
      CHECK(gaps.d_gap < 1e-8);
      CHECK(gaps.g_gap < 1e-8);
    }
  }
}

TEST_CASE("product and derivative properties") {
  Rng rng(36);
  for (int n : {3, 4}) {
    SubsetBasis basis(n, 2);
    CMatrix a = gaussian_matrix(rng, n, n);
    CMatrix b = gaussian_matrix(rng, n, n);
    CMatrix c = gaussian_matrix(rng, n, n);
    CMatrix d = gaussian_matrix(rng, n, n);
    auto gaps = verify_product_derivative_properties(a, b, c, d, basis);
    for (double g : gaps.product) CHECK(g < 1e-10);
    for (double g : gaps.derivative) CHECK(g < 1e-8);
  }
}

TEST_CASE("adjoint compatibility") {
  Rng rng(37);
  SubsetBasis basis(4, 2);
  CMatrix a = gaussian_matrix(rng, 4, 4);
  auto lhs = m0(a, basis).adjoint();
  auto rhs = m0(a.adjoint(), basis);
  CHECK((lhs.entries() - rhs.entries()).norm() <=
        1e-12 * std::max(rhs.norm(), 1.0));
}

TEST_CASE("compound of a PSD matrix is PSD") {
  Rng rng(38);
  SubsetBasis basis(4, 2);
  CMatrix a = random_pd(rng, 4);
  auto op = m0(a, basis);
  auto h = HermitianMatrix(op.entries());
  CHECK(classify_cone(h).lambda_min > 0.0);
}

TEST_CASE("compound spectrum is the multiset of eigenvalue products") {
  Rng rng(39);
  auto a = HermitianMatrix(random_hermitian(rng, 4));
  auto dec = decompose(a);
  SubsetBasis basis(4, 2);
  auto op = m0(a.mat(), basis);
  auto opdec = decompose(HermitianMatrix(op.entries()));

  std::vector<double> expect;
  for (const auto& s : basis.subsets()) {
    expect.push_back(dec.eigenvalues[s[0]] * dec.eigenvalues[s[1]]);
  }
  std::sort(expect.begin(), expect.end());
  std::vector<double> got(opdec.eigenvalues.data(),
                          opdec.eigenvalues.data() + opdec.eigenvalues.size());
  std::sort(got.begin(), got.end());
  double scale = std::max(std::abs(expect.front()), std::abs(expect.back()));
  for (size_t i = 0; i < expect.size(); ++i) {
    CHECK(std::abs(expect[i] - got[i]) <= 1e-8 * std::max(scale, 1.0));
  }
}

TEST_CASE("multilinearity of the slot sum") {
  Rng rng(40);
  SubsetBasis basis(3, 2);
  CMatrix a = gaussian_matrix(rng, 3, 3);
  CMatrix b = gaussian_matrix(rng, 3, 3);
  CMatrix c = gaussian_matrix(rng, 3, 3);
  const double s = 1.7;

  auto lhs = mixed_operator({a + s * b, c}, basis);
  auto rhs = mixed_operator({a, c}, basis) +
             mixed_operator({b, c}, basis).scaled(s);
  CHECK((lhs.entries() - rhs.entries()).norm() <=
        1e-10 * std::max(rhs.norm(), 1.0));
}
