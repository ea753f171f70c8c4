#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ktrace/errors.hpp"
#include "ktrace/quadrature.hpp"

using namespace ktrace;

TEST_CASE("adaptive rule is exact on polynomials") {
  auto r = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(1.0 / 3).epsilon(1e-15));

  auto s = integrate_adaptive([](double x) { return 4 * x * x * x - x; },
                              -1.0, 2.0);
  CHECK(s.value == doctest::Approx(15.0 - 1.5).epsilon(1e-14));
}

TEST_CASE("adaptive rule on smooth transcendental integrands") {
  auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                              3.141592653589793);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));

  auto s = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(s.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("compactified resolvent product integral") {
  // integral over [0, inf) of dt / ((1+t)(4+t)) under t = (1-u)/u becomes
  // integral over [0, 1] of du / (1+3u); value ln(4)/3.
  auto r = integrate_adaptive([](double u) { return 1.0 / (1.0 + 3.0 * u); },
                              0.0, 1.0);
  CHECK(r.value == doctest::Approx(0.46209812037329687).epsilon(1e-13));
}

TEST_CASE("adaptive rule reports segment exhaustion") {
  auto spike = [](double x) { return 1.0 / (1e-8 + x * x); };
  CHECK_THROWS_AS(
      integrate_adaptive(spike, -1.0, 1.0, 1e-12, 0.0, 2), SolverError);
}

TEST_CASE("matrix-valued integration") {
  auto f = [](double x) {
    CMatrix m(2, 2);
    m << Complex(1, 0), Complex(x, 0), Complex(x, 0), Complex(x * x, 0);
    return m;
  };
  CMatrix v = integrate_adaptive_matrix(f, 0.0, 1.0);
  CHECK(std::abs(v(0, 0) - Complex(1.0, 0)) < 1e-13);
  CHECK(std::abs(v(0, 1) - Complex(0.5, 0)) < 1e-13);
  CHECK(std::abs(v(1, 0) - Complex(0.5, 0)) < 1e-13);
  CHECK(std::abs(v(1, 1) - Complex(1.0 / 3, 0)) < 1e-13);
}

TEST_CASE("gauss-legendre unit rule basics") {
  for (int n : {32, 64}) {
    const auto& rule = gauss_legendre_unit(n);
    REQUIRE(int(rule.nodes.size()) == n);
    REQUIRE(int(rule.weights.size()) == n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (double x : rule.nodes) {
      CHECK(x > 0.0);
      CHECK(x < 1.0);
    }
    // symmetry of the node set about 1/2
    for (int i = 0; i < n; ++i) {
      CHECK(rule.nodes[i] ==
            doctest::Approx(1.0 - rule.nodes[n - 1 - i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("gauss-legendre exactness on high-degree monomials") {
  const auto& rule = gauss_legendre_unit(32);
  // degree 5 (exact for any rule with >= 3 nodes)
  double v5 = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    v5 += rule.weights[i] * std::pow(rule.nodes[i], 5);
  }
  CHECK(v5 == doctest::Approx(1.0 / 6).epsilon(1e-14));
  // degree 63 = 2*32 - 1, the exactness limit for 32 nodes
  double v63 = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    v63 += rule.weights[i] * std::pow(rule.nodes[i], 63);
  }
  CHECK(v63 == doctest::Approx(1.0 / 64).epsilon(1e-12));
}

TEST_CASE("doubling integrator on a smooth integrand") {
  double v = integrate_unit_doubling([](double x) { return std::exp(x); });
  CHECK(v == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));

  double w = integrate_unit_doubling(
      [](double x) { return 1.0 / (1.0 + 3.0 * x); });
  CHECK(w == doctest::Approx(0.46209812037329687).epsilon(1e-12));
}
