#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "ktrace/errors.hpp"
#include "ktrace/hermitian.hpp"
#include "ktrace/ktrace.hpp"
#include "ktrace/mixed_discriminant.hpp"
#include "ktrace/random.hpp"

using namespace ktrace;

namespace {

std::vector<CMatrix> copies(const CMatrix& a, int count) {
  return std::vector<CMatrix>(size_t(count), a);
}

}  // namespace

TEST_CASE("all slots equal gives the determinant") {
  Rng rng(41);
  CMatrix a = random_pd(rng, 4);
  double det = a.determinant().real();
  CHECK(mixed_disc_bruteforce(copies(a, 4)).value ==
        doctest::Approx(det).epsilon(1e-11));
}

TEST_CASE("all identities give one") {
  CHECK(mixed_disc_bruteforce(copies(CMatrix::Identity(5, 5), 5)).value ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("two-by-two closed form") {
  Rng rng(42);
  CMatrix a = random_pd(rng, 2);
  CMatrix b = random_pd(rng, 2);
  double expect =
      (a.trace().real() * b.trace().real() - (a * b).trace().real()) / 2.0;
  CHECK(mixed_disc_bruteforce({a, b}).value ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("slot symmetry") {
  Rng rng(43);
  CMatrix a = random_pd(rng, 3);
  CMatrix b = random_pd(rng, 3);
  CMatrix c = random_pd(rng, 3);
  double v1 = mixed_disc_bruteforce({a, b, c}).value;
  double v2 = mixed_disc_bruteforce({c, a, b}).value;
  double v3 = mixed_disc_bruteforce({b, c, a}).value;
  CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));
  CHECK(v1 == doctest::Approx(v3).epsilon(1e-12));
}

TEST_CASE("multilinearity in a slot") {
  Rng rng(44);
  CMatrix a = random_pd(rng, 3);
  CMatrix a2 = random_pd(rng, 3);
  CMatrix b = random_pd(rng, 3);
  CMatrix c = random_pd(rng, 3);
  const double s = 0.6;
  double lhs = mixed_disc_bruteforce({a + s * a2, b, c}).value;
  double rhs = mixed_disc_bruteforce({a, b, c}).value +
               s * mixed_disc_bruteforce({a2, b, c}).value;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("exterior route matches the definition") {
  Rng rng(45);
  for (int n = 2; n <= 5; ++n) {
    for (int k = 1; k <= n; ++k) {
      std::vector<CMatrix> as;
      for (int i = 0; i < k; ++i) as.push_back(random_pd(rng, n));
      auto viaw = mixed_disc_via_wedge(as, n);
      std::vector<CMatrix> padded = as;
      for (int i = k; i < n; ++i) padded.push_back(CMatrix::Identity(n, n));
      auto ref = mixed_disc_bruteforce(padded);
      CHECK(viaw.value == doctest::Approx(ref.value).epsilon(1e-9));
    }
  }
}

TEST_CASE("k copies against the k-trace") {
  Rng rng(46);
  const int n = 5;
  auto a = HermitianMatrix(random_pd(rng, n));
  for (int k = 1; k <= n; ++k) {
    auto v = mixed_disc_via_wedge(copies(a.mat(), k), n);
    double expect = trace_k_eigen(a, k).value / binomial(n, k);
    CHECK(v.value == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("definition route refuses past the factorial budget") {
  CHECK_THROWS_AS(mixed_disc_bruteforce(copies(CMatrix::Identity(9, 9), 9)),
                  ResourceError);
}

namespace {

// unit-trace inputs keep every discriminant O(1), so absolute tolerances
// below are meaningful
HermitianMatrix unit_pd(Rng& rng, int n) {
  auto m = HermitianMatrix(random_pd(rng, n));
  return m.scaled(1.0 / m.trace());
}

}  // namespace

TEST_CASE("quadratic inequality gap") {
  Rng rng(47);
  auto a = unit_pd(rng, 4);
  std::vector<HermitianMatrix> rest = {unit_pd(rng, 4), unit_pd(rng, 4)};
  // proportional arguments sit on the equality case
  CHECK(std::abs(af_gap(a, a.scaled(2.5), rest)) < 1e-12);
  // degenerate second argument: both sides vanish
  auto zero = HermitianMatrix::zero(4);
  CHECK(std::abs(af_gap(a, zero, rest)) < 1e-14);
  // generic PD arguments satisfy the inequality
  for (int trial = 0; trial < 25; ++trial) {
    auto x = unit_pd(rng, 4);
    auto y = unit_pd(rng, 4);
    CHECK(af_gap(x, y, rest) >= -1e-12);
  }
}

TEST_CASE("repeated-split inequality gap") {
  Rng rng(48);
  auto a = unit_pd(rng, 4);
  auto b = unit_pd(rng, 4);
  std::vector<HermitianMatrix> rest = {unit_pd(rng, 4), unit_pd(rng, 4)};
  // k = 2 here; the extreme splits compare a value with itself
  CHECK(std::abs(general_af_gap(a, b, rest, 2)) < 1e-12);
  CHECK(std::abs(general_af_gap(a, b, rest, 0)) < 1e-12);
  CHECK(general_af_gap(a, b, rest, 1) >= -1e-12);
}

TEST_CASE("chord concavity of the k-th root") {
  Rng rng(49);
  auto a = unit_pd(rng, 4);
  auto b = unit_pd(rng, 4);
  std::vector<HermitianMatrix> rest = {unit_pd(rng, 4), unit_pd(rng, 4)};
  CHECK(std::abs(bm_concavity_gap(a, b, rest, 0.0)) < 1e-13);
  CHECK(std::abs(bm_concavity_gap(a, b, rest, 1.0)) < 1e-13);
  CHECK(std::abs(bm_concavity_gap(a, a, rest, 0.37)) < 1e-12);
  for (double tau : {0.25, 0.5, 0.75}) {
    CHECK(bm_concavity_gap(a, b, rest, tau) >= -1e-12);
  }
}
