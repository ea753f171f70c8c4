#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ktrace/errors.hpp"
#include "ktrace/hermitian.hpp"
#include "ktrace/random.hpp"

using namespace ktrace;

namespace {

HermitianMatrix make_pd(Rng& rng, int n) {
  return HermitianMatrix(random_pd(rng, n));
}

HermitianMatrix make_dir(Rng& rng, int n) {
  return HermitianMatrix(random_hermitian_unit(rng, n));
}

}  // namespace

TEST_CASE("construction symmetrizes and validates") {
  CMatrix m(2, 2);
  m << Complex(1, 0), Complex(0, 1), Complex(0, -1), Complex(2, 0);
  HermitianMatrix h(m);
  CHECK(h.dim() == 2);
  CHECK(h.trace() == doctest::Approx(3.0));

  // a visibly non-Hermitian input is rejected
  CMatrix bad(2, 2);
  bad << Complex(1, 0), Complex(5, 0), Complex(-5, 0), Complex(1, 0);
  CHECK_THROWS_AS(HermitianMatrix{bad}, DomainError);

  CMatrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(HermitianMatrix{rect}, ArgumentError);
}

TEST_CASE("identity zero diagonal constructors") {
  auto i3 = HermitianMatrix::identity(3);
  CHECK(i3.trace() == 3.0);
  auto z = HermitianMatrix::zero(4);
  CHECK(z.norm() == 0.0);
  RVector d(3);
  d << 3, 1, 2;
  auto dm = HermitianMatrix::diagonal(d);
  CHECK(dm(0, 0) == Complex(3, 0));
  CHECK(dm(2, 2) == Complex(2, 0));
  CHECK(dm(0, 1) == Complex(0, 0));
}

TEST_CASE("decompose orders eigenvalues descending and reconstructs") {
  Rng rng(11);
  auto a = make_pd(rng, 5);
  auto dec = decompose(a);
  for (int i = 1; i < 5; ++i) {
    CHECK(dec.eigenvalues[i - 1] >= dec.eigenvalues[i]);
  }
  CHECK((dec.reconstruct() - a.mat()).norm() <= 1e-12 * a.norm());
}

TEST_CASE("cone classification") {
  RVector d(3);
  d << 2, 1, 0.5;
  CHECK(classify_cone(HermitianMatrix::diagonal(d)).classification ==
        Cone::positive_definite);
  d << 2, 1, 0;
  CHECK(classify_cone(HermitianMatrix::diagonal(d)).classification ==
        Cone::positive_semidefinite);
  d << 2, 1, -1;
  auto tag = classify_cone(HermitianMatrix::diagonal(d));
  CHECK(tag.classification == Cone::indefinite);
  CHECK(tag.lambda_min == doctest::Approx(-1.0));
  CHECK(tag.lambda_max == doctest::Approx(2.0));
}

TEST_CASE("matrix functions roundtrip") {
  Rng rng(12);
  auto a = make_pd(rng, 4);

  CHECK((matrix_exp(HermitianMatrix::zero(3)).mat() -
         CMatrix::Identity(3, 3)).norm() < 1e-14);

  auto back = matrix_exp(matrix_log(a));
  CHECK((back.mat() - a.mat()).norm() <= 1e-12 * a.norm());

  auto half = matrix_pow(a, 0.5);
  CHECK(((half.mat() * half.mat()) - a.mat()).norm() <= 1e-12 * a.norm());

  auto inv = matrix_inverse(a);
  CHECK(((inv.mat() * a.mat()) - CMatrix::Identity(4, 4)).norm() < 1e-10);

  RVector d(2);
  d << 1, -1;
  CHECK_THROWS_AS(matrix_log(HermitianMatrix::diagonal(d)), DomainError);
  CHECK_THROWS_AS(matrix_pow(HermitianMatrix::diagonal(d), 0.5), DomainError);
  CHECK_THROWS_AS(matrix_inverse(HermitianMatrix::diagonal(d).scaled(0.0)),
                  DomainError);
}

TEST_CASE("scalar divided differences") {
  CHECK(log_divided_difference(4.0, 2.0) ==
        doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-14));
  CHECK(log_divided_difference(3.0, 3.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // near-coincident arguments must not cancel catastrophically
  double a = 2.0, b = 2.0 * (1.0 + 1e-13);
  CHECK(log_divided_difference(a, b) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(log_divided_difference(-1.0, 2.0), DomainError);

  CHECK(exp_divided_difference(1.0, 0.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(exp_divided_difference(2.0, 2.0) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-14));
}

TEST_CASE("second divided difference of log and its integral form") {
  // triple point: f''(x)/2 at x = 1 is -1/2, the integral form flips sign
  CHECK(log_second_divided_difference(1.0, 1.0, 1.0) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(resolvent_triple_integral(1.0, 1.0, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // symmetry under argument permutation
  double v1 = log_second_divided_difference(0.5, 2.0, 3.0);
  double v2 = log_second_divided_difference(3.0, 0.5, 2.0);
  CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));

  // integral equals minus the divided difference at distinct points too
  CHECK(resolvent_triple_integral(0.5, 2.0, 3.0) ==
        doctest::Approx(-v1).epsilon(1e-11));
}

TEST_CASE("t_operator at the identity is the identity map") {
  Rng rng(13);
  auto c = make_dir(rng, 4);
  auto t = t_operator(HermitianMatrix::identity(4), c);
  CHECK((t.mat() - c.mat()).norm() <= 1e-12 * c.norm());
}

TEST_CASE("r_operator at the identity squares the direction") {
  Rng rng(14);
  auto c = make_dir(rng, 4);
  auto r = r_operator(HermitianMatrix::identity(4), c);
  CMatrix c2 = c.mat() * c.mat();
  CHECK((r.mat() - c2).norm() <= 1e-12 * std::max(c2.norm(), 1.0));
}

TEST_CASE("closed-form and quadrature operator routes agree") {
  Rng rng(15);
  auto a = make_pd(rng, 4);
  auto c = make_dir(rng, 4);
  auto t1 = t_operator(a, c);
  auto t2 = t_operator_quadrature(a, c);
  CHECK((t1.mat() - t2.mat()).norm() <= 1e-8 * std::max(t1.norm(), 1.0));
  auto r1 = r_operator(a, c);
  auto r2 = r_operator_quadrature(a, c);
  CHECK((r1.mat() - r2.mat()).norm() <= 1e-8 * std::max(r1.norm(), 1.0));
}

TEST_CASE("t_operator differentiates the matrix logarithm") {
  Rng rng(16);
  auto a = make_pd(rng, 4);
  auto c = make_dir(rng, 4);
  const double h = 1e-5;
  CMatrix fd = (matrix_log(a + c.scaled(h)).mat() -
                matrix_log(a - c.scaled(h)).mat()) / (2 * h);
  auto t = t_operator(a, c);
  CHECK((t.mat() - fd).norm() <= 1e-7 * std::max(t.norm(), 1.0));
}

TEST_CASE("exp_derivative against finite differences and commuting case") {
  Rng rng(17);
  auto a = make_dir(rng, 4);
  auto g = make_dir(rng, 4);
  const double h = 1e-5;
  CMatrix fd = (matrix_exp(a + g.scaled(h)).mat() -
                matrix_exp(a - g.scaled(h)).mat()) / (2 * h);
  auto d = exp_derivative(a, g);
  CHECK((d.mat() - fd).norm() <= 1e-7 * std::max(d.norm(), 1.0));

  // direction = base point: derivative is exp(A) A exactly
  auto da = exp_derivative(a, a);
  CMatrix expect = matrix_exp(a).mat() * a.mat();
  CHECK((da.mat() - expect).norm() <= 1e-11 * std::max(expect.norm(), 1.0));
}

TEST_CASE("inverse_derivative") {
  Rng rng(18);
  auto c = make_dir(rng, 3);
  // at the identity: -C
  auto di = inverse_derivative(HermitianMatrix::identity(3), c);
  CHECK((di.mat() + c.mat()).norm() < 1e-12);

  auto a = make_pd(rng, 3);
  const double h = 1e-6;
  CMatrix fd = (matrix_inverse(a + c.scaled(h)).mat() -
                matrix_inverse(a - c.scaled(h)).mat()) / (2 * h);
  auto d = inverse_derivative(a, c);
  CHECK((d.mat() - fd).norm() <= 1e-6 * std::max(d.norm(), 1.0));
}
