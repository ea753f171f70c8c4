#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "ktrace/concavity.hpp"
#include "ktrace/errors.hpp"
#include "ktrace/ktrace.hpp"
#include "ktrace/random.hpp"

using namespace ktrace;

namespace {

HermitianMatrix pd_with_spectrum(Rng& rng, int n, double lo, double hi) {
  CMatrix g = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  RVector d(n);
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) {
    d[i] = std::exp(llo + (lhi - llo) * rng.uniform());
  }
  CMatrix m = q * d.asDiagonal() * q.adjoint();
  return HermitianMatrix((m + m.adjoint()) / 2.0);
}

HermitianMatrix unit_direction(Rng& rng, int n) {
  return HermitianMatrix(random_hermitian_unit(rng, n));
}

}  // namespace

TEST_CASE("objective special cases") {
  Rng rng(51);
  const int n = 4;
  auto a = pd_with_spectrum(rng, n, 0.5, 2.0);

  // zero offset, root form: the k-th root of the k-trace
  for (int k = 1; k <= n; ++k) {
    ObjectiveSpec spec{HermitianMatrix::zero(n), k, ObjectiveForm::root};
    double expect = std::pow(trace_k_eigen(a, k).value, 1.0 / k);
    CHECK(objective(spec, a) == doctest::Approx(expect).epsilon(1e-11));
  }

  // top order: geometric determinant mean times the offset factor
  auto h = HermitianMatrix(random_hermitian(rng, n));
  ObjectiveSpec top{h, n, ObjectiveForm::root};
  double det = 1.0;
  auto dec = decompose(a);
  for (int i = 0; i < n; ++i) det *= dec.eigenvalues[i];
  double expect = std::pow(det, 1.0 / n) * std::exp(h.trace() / n);
  CHECK(objective(top, a) == doctest::Approx(expect).epsilon(1e-10));

  // identity base point: k-trace of exp(H)
  ObjectiveSpec spec2{h, 2, ObjectiveForm::root};
  double expect2 =
      std::pow(trace_k_eigen(matrix_exp(h), 2).value, 1.0 / 2);
  CHECK(objective(spec2, HermitianMatrix::identity(n)) ==
        doctest::Approx(expect2).epsilon(1e-11));

  // the log form is the log of the root form times k... i.e. consistent
  ObjectiveSpec lg{h, 2, ObjectiveForm::log};
  CHECK(objective(lg, a) ==
        doctest::Approx(2.0 * std::log(objective(spec2, a))).epsilon(1e-11));

  RVector neg(n);
  neg << 1, 1, 1, -1;
  CHECK_THROWS_AS(objective(spec2, HermitianMatrix::diagonal(neg)),
                  DomainError);
}

TEST_CASE("chord endpoints and coincident arguments") {
  Rng rng(52);
  const int n = 3;
  auto h = HermitianMatrix(random_hermitian(rng, n));
  auto a1 = pd_with_spectrum(rng, n, 0.1, 5.0);
  auto a2 = pd_with_spectrum(rng, n, 0.1, 5.0);
  ObjectiveSpec spec{h, 2, ObjectiveForm::root};

  CHECK(std::abs(chord_gap(spec, a1, a2, 0.0).gap) < 1e-12);
  CHECK(std::abs(chord_gap(spec, a1, a2, 1.0).gap) < 1e-12);
  auto same = chord_gap(spec, a1, a1, 0.4);
  CHECK(std::abs(same.gap) <= 1e-11 * std::max(std::abs(same.lhs), 1.0));
  CHECK_THROWS_AS(chord_gap(spec, a1, a2, 1.5), ArgumentError);
}

TEST_CASE("chords lie below the graph") {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + trial % 4;
    int k = 1 + trial % n;
    auto form = trial % 2 == 0 ? ObjectiveForm::root : ObjectiveForm::log;
    ObjectiveSpec spec{HermitianMatrix(random_hermitian(rng, n)), k, form};
    auto a1 = pd_with_spectrum(rng, n, 0.05, 3.0);
    auto a2 = pd_with_spectrum(rng, n, 0.05, 3.0);
    auto cert = chord_gap(spec, a1, a2, 0.1 + 0.8 * rng.uniform());
    double scale = std::max({std::abs(cert.lhs), std::abs(cert.rhs), 1.0});
    CHECK(cert.gap >= -1e-9 * scale);
  }
}

TEST_CASE("second difference along directions") {
  Rng rng(54);
  const int n = 4;
  auto a = pd_with_spectrum(rng, n, 0.5, 2.0);
  auto h = HermitianMatrix(random_hermitian(rng, n));
  ObjectiveSpec spec{h, 2, ObjectiveForm::root};

  CHECK(second_directional_derivative(spec, a, HermitianMatrix::zero(n),
                                      1e-3) == 0.0);

  // along the ray through A the root form is linear, so curvature vanishes
  double ray = second_directional_derivative(spec, a, a, 1e-3);
  CHECK(std::abs(ray) <= 1e-6 * std::max(objective(spec, a), 1.0));

  for (int trial = 0; trial < 10; ++trial) {
    auto c = unit_direction(rng, n);
    double v = second_directional_derivative(spec, a, c, 1e-2);
    CHECK(v <= 1e-6 * std::max(objective(spec, a), 1.0));
  }

  // a step large enough to leave the cone is refused
  RVector d(n);
  d << 1, 1, 1, 1;
  auto c = HermitianMatrix::diagonal(d);
  CHECK_THROWS_AS(second_directional_derivative(spec, a, c, 100.0),
                  DomainError);
}

TEST_CASE("integral inequality at the commuting equality point") {
  const int n = 3;
  auto i = HermitianMatrix::identity(n);
  Rng rng(55);
  auto b = pd_with_spectrum(rng, n, 0.2, 2.0);

  // C = 0 makes both operators vanish
  CHECK(lieb_lemma_gap(i, HermitianMatrix::zero(n), b) == doctest::Approx(0.0));

  // A = I, C = I: both sides equal trace(B)
  CHECK(std::abs(lieb_lemma_gap(i, i, b)) < 1e-10);
}

TEST_CASE("integral inequality on random instances") {
  Rng rng(56);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 2 + trial % 4;
    auto a = pd_with_spectrum(rng, n, 0.5, 2.0);
    auto c = unit_direction(rng, n);
    auto b = pd_with_spectrum(rng, n, 0.1, 1.0);
    CHECK(lieb_lemma_gap(a, c, b) <= 1e-8);
  }
  // PSD boundary input is accepted
  Rng rng2(57);
  auto a = pd_with_spectrum(rng2, 3, 0.5, 2.0);
  auto c = unit_direction(rng2, 3);
  auto b = HermitianMatrix(random_psd_rank_deficient(rng2, 3, 1));
  CHECK(lieb_lemma_gap(a, c, b) <= 1e-7);

  RVector neg(3);
  neg << 1, 1, -1;
  CHECK_THROWS_AS(
      lieb_lemma_gap(a, c, HermitianMatrix::diagonal(neg)), DomainError);
}

TEST_CASE("wedge form reduces to the base inequality at order one") {
  Rng rng(58);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + trial % 3;
    auto a = pd_with_spectrum(rng, n, 0.5, 2.0);
    auto c = unit_direction(rng, n);
    auto b = pd_with_spectrum(rng, n, 0.1, 1.0);
    double direct = lieb_lemma_gap(a, c, b);
    double viaw = trace_ineq_gap(a, b, c, 1);
    CHECK(std::abs(direct - viaw) <=
          1e-10 * std::max({1.0, std::abs(direct), std::abs(viaw)}));
  }
}

TEST_CASE("wedge trace inequality at higher order") {
  Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 3 + trial % 2;
    int k = 2 + trial % 2;
    if (k > n) k = n;
    auto a = pd_with_spectrum(rng, n, 0.5, 2.0);
    auto c = unit_direction(rng, n);
    auto b = pd_with_spectrum(rng, n, 0.1, 1.0);
    CHECK(trace_ineq_gap(a, b, c, k) <= 1e-8);
  }
}

TEST_CASE("jensen gap for products of independent factors") {
  Rng rng(60);
  const int n = 3;

  // deterministic summands: both sides identical
  std::vector<FiniteSupportMatrix> det(2);
  det[0].atoms.push_back({1.0, pd_with_spectrum(rng, n, 0.5, 2.0)});
  det[1].atoms.push_back({1.0, pd_with_spectrum(rng, n, 0.5, 2.0)});
  CHECK(std::abs(jensen_multiconcave_gap(det, 2, ObjectiveForm::root)) <
        1e-11);

  // single two-atom summand, first order
  std::vector<FiniteSupportMatrix> one(1);
  one[0].atoms.push_back({0.5, pd_with_spectrum(rng, n, 0.5, 2.0)});
  one[0].atoms.push_back({0.5, pd_with_spectrum(rng, n, 0.5, 2.0)});
  CHECK(jensen_multiconcave_gap(one, 1, ObjectiveForm::root) >= -1e-11);

  // two summands, two atoms each, order two, both forms
  std::vector<FiniteSupportMatrix> two(2);
  for (auto& s : two) {
    s.atoms.push_back({0.3, pd_with_spectrum(rng, n, 0.5, 2.0)});
    s.atoms.push_back({0.7, pd_with_spectrum(rng, n, 0.5, 2.0)});
  }
  CHECK(jensen_multiconcave_gap(two, 2, ObjectiveForm::root) >= -1e-9);
  CHECK(jensen_multiconcave_gap(two, 2, ObjectiveForm::log) >= -1e-9);

  // non-PD atom is refused
  std::vector<FiniteSupportMatrix> bad(1);
  bad[0].atoms.push_back({1.0, HermitianMatrix::zero(n)});
  CHECK_THROWS_AS(jensen_multiconcave_gap(bad, 1, ObjectiveForm::root),
                  DomainError);
}

TEST_CASE("homogeneity of the objective") {
  Rng rng(61);
  const int n = 4;
  auto a = pd_with_spectrum(rng, n, 0.3, 3.0);
  auto h = HermitianMatrix(random_hermitian(rng, n));

  ObjectiveSpec root{h, 2, ObjectiveForm::root};
  CHECK(homogeneity_check(root, a, 1.0) == doctest::Approx(0.0));
  CHECK(homogeneity_check(root, a, 2.0) <=
        1e-10 * std::max(objective(root, a), 1.0));
  CHECK(homogeneity_check(root, a, 3.7) <=
        1e-10 * std::max(objective(root, a), 1.0));

  ObjectiveSpec lg{h, 3, ObjectiveForm::log};
  CHECK(homogeneity_check(lg, a, 3.7) <= 1e-10);
  CHECK_THROWS_AS(homogeneity_check(root, a, 0.0), ArgumentError);
}

TEST_CASE("scalar two-term power mean inequality") {
  CHECK(scalar_holder_gap(2.0, 3.0, 4.0, 5.0, 0.0) == doctest::Approx(0.0));
  CHECK(scalar_holder_gap(2.0, 3.0, 4.0, 5.0, 1.0) == doctest::Approx(0.0));
  CHECK(scalar_holder_gap(2.0, 0.0, 4.0, 0.0, 0.6) ==
        doctest::Approx(0.0).epsilon(1e-14));
  // proportional pairs are the equality case
  CHECK(std::abs(scalar_holder_gap(2.0, 3.0, 2.0, 3.0, 0.3)) < 1e-14);

  Rng rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    double a = 10 * rng.uniform(), b = 10 * rng.uniform();
    double c = 10 * rng.uniform(), d = 10 * rng.uniform();
    double s = rng.uniform();
    CHECK(scalar_holder_gap(a, b, c, d, s) >= -1e-12);
  }
  CHECK_THROWS_AS(scalar_holder_gap(-1.0, 1.0, 1.0, 1.0, 0.5), ArgumentError);
}
