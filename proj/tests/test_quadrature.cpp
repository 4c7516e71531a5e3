#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "sphk/quadrature.hpp"
#include "sphk/special_functions.hpp"
#include "sphk/util.hpp"

using namespace sphk;

TEST_CASE("three-point Chebyshev rule is the classical one") {
  QuadratureRule rule = build_rule(1, 3);
  REQUIRE(rule.q() == 3);
  CHECK(rule.nodes[0] ==
        doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(rule.nodes[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rule.nodes[2] == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  for (double w : rule.weights) {
    CHECK(w == doctest::Approx(M_PI / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("one- and two-point Legendre rules") {
  QuadratureRule one = build_rule(2, 1);
  REQUIRE(one.q() == 1);
  CHECK(one.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(one.weights[0] == doctest::Approx(2.0).epsilon(1e-14));

  QuadratureRule two = build_rule(2, 2);
  REQUIRE(two.q() == 2);
  CHECK(two.nodes[1] ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(two.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(two.weights[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("moments are exact through degree 2q - 1") {
  for (int d : {1, 2, 3, 5, 8}) {
    for (int q : {1, 2, 3, 6, 10, 40}) {
      QuadratureRule rule = build_rule(d, q);
      for (int k = 0; k <= 2 * q - 1 && k <= 30; ++k) {
        double got =
            integrate(rule, [&](double x) { return std::pow(x, k); }).real();
        CHECK(got ==
              doctest::Approx(oracle::weight_moment(d, k)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("total mass is the surface ratio") {
  for (int d = 1; d <= 12; ++d) {
    QuadratureRule rule = build_rule(d, 17);
    double mass = 0.0;
    for (double w : rule.weights) mass += w;
    double want = oracle::sphere_surface_gamma(d) /
                  oracle::sphere_surface_gamma(d - 1);
    CHECK(mass == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("nodes are interior, sorted, and exactly symmetric") {
  for (int d : {1, 2, 4, 7}) {
    for (int q : {5, 8, 33, 200}) {
      QuadratureRule rule = build_rule(d, q);
      REQUIRE(rule.q() == q);
      for (int i = 0; i < q; ++i) {
        CHECK(rule.nodes[i] > -1.0);
        CHECK(rule.nodes[i] < 1.0);
        CHECK(rule.weights[i] > 0.0);
        // Symmetrization makes the reflection exact at the bit level.
        CHECK(rule.nodes[i] == -rule.nodes[q - 1 - i]);
        CHECK(rule.weights[i] == rule.weights[q - 1 - i]);
        if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
      }
      if (q % 2 == 1) CHECK(rule.nodes[q / 2] == 0.0);
    }
  }
}

TEST_CASE("basis orthogonality under the rule") {
  // The full sweep lives in the acceptance run; spot-check a few pairs here.
  for (int d : {1, 3}) {
    UltrasphericalBasis basis = make_basis(d, 8);
    QuadratureRule rule = build_rule(d, 12);
    for (int n = 0; n <= 8; ++n) {
      for (int m = 0; m <= 8; ++m) {
        double got = integrate(rule, [&](double x) {
                       return ultraspherical_eval(basis, n, x) *
                              ultraspherical_eval(basis, m, x);
                     }).real();
        double want = (n == m) ? basis.norm_constants[n] : 0.0;
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("integrate accepts complex integrands") {
  QuadratureRule rule = build_rule(2, 6);
  std::complex<double> got = integrate(rule, [](double x) {
    return std::complex<double>(x, x * x);
  });
  CHECK(got.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(got.imag() ==
        doctest::Approx(oracle::weight_moment(2, 2)).epsilon(1e-13));
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(build_rule(1, 0), std::domain_error);
  CHECK_THROWS_AS(build_rule(0, 5), std::domain_error);
  CHECK_THROWS_AS(build_rule(-2, 5), std::domain_error);
}
