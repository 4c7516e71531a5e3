#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sphk/schoenberg.hpp"
#include "sphk/special_functions.hpp"
#include "sphk/util.hpp"

using namespace sphk;

namespace {

GroupModel line() { return GroupModel::real_line(); }

std::vector<GroupElement> line_grid() {
  return {GroupElement(0.0), GroupElement(0.5), GroupElement(-1.0),
          GroupElement(2.0)};
}

// phi_{n,d} supported on a single degree: f = c_k(d, x) * exp(-|u|).
KernelSpec single_degree(int d, int k) {
  return KernelSpec::tensor(SpatialFactor::ultraspherical(d, k),
                            PdFunctionSpec::exp_decay(line(), 1.0));
}

}  // namespace

TEST_CASE("extraction isolates a single basis degree") {
  for (int d : {1, 2, 3, 5}) {
    SchoenbergSequence seq = extract(single_degree(d, 4), d, 8, line_grid());
    CHECK(seq.d == d);
    CHECK(seq.basis == ExpansionBasis::Ultraspherical);
    for (int n = 0; n <= 8; ++n) {
      for (const GroupElement& u : line_grid()) {
        std::complex<double> got = seq.coef_at(n, u);
        double want =
            (n == 4) ? std::exp(-line().norm(u)) : 0.0;
        CHECK(std::abs(got - std::complex<double>(want)) < 1e-12);
      }
    }
    CHECK(seq.identity_mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(seq.truncation_bound < 1e-12);
    CHECK(seq.diagnostics.certifying);
  }
}

TEST_CASE("extraction of monomial kernels reproduces the connection rows") {
  KernelSpec cubic = KernelSpec::tensor(SpatialFactor::monomial(3),
                                        PdFunctionSpec::exp_decay(line(), 2.0));
  for (int d : {1, 2, 3, 5}) {
    SchoenbergSequence seq = extract(cubic, d, 5, line_grid());
    for (int n = 0; n <= 5; ++n) {
      double weight =
          (n == 3)   ? monomial_connection_value(d, 3, 0)
          : (n == 1) ? monomial_connection_value(d, 3, 1)
                     : 0.0;
      for (const GroupElement& u : line_grid()) {
        std::complex<double> want =
            weight * std::exp(-2.0 * line().norm(u));
        CHECK(std::abs(seq.coef_at(n, u) - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("the constant kernel concentrates at degree zero") {
  KernelSpec flat = KernelSpec::tensor(
      SpatialFactor::monomial(0), PdFunctionSpec::constant(line(), 2.5));
  SchoenbergSequence seq = extract(flat, 3, 6, line_grid());
  CHECK(std::abs(seq.coef_at(0, GroupElement(0.5)) - 2.5) < 1e-12);
  for (int n = 1; n <= 6; ++n) {
    CHECK(std::abs(seq.coef_at(n, GroupElement(0.0))) < 1e-12);
  }
  CHECK(seq.identity_mass == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("extract validates its inputs") {
  KernelSpec k = single_degree(2, 1);
  std::vector<GroupElement> no_identity = {GroupElement(1.0)};
  CHECK_THROWS_AS(extract(k, 2, 4, no_identity), std::domain_error);
  CHECK_THROWS_AS(extract(k, 0, 4, line_grid()), std::domain_error);
  CHECK_THROWS_AS(extract(k, 2, -1, line_grid()), std::domain_error);
  CHECK_THROWS_AS(extract(k, 2, 4, {}), std::domain_error);
  // Explicit rules must resolve products up to degree n_max + deg(f).
  CHECK_THROWS_AS(extract(k, 2, 4, line_grid(), 3), std::domain_error);
  CHECK_NOTHROW(extract(k, 2, 4, line_grid(), 6));
  // Wrong-group grid entries are rejected by the element check.
  std::vector<GroupElement> foreign = {GroupElement(0.0),
                                       GroupElement(std::int64_t{1})};
  CHECK_THROWS_AS(extract(k, 2, 4, foreign), std::domain_error);
}

TEST_CASE("round trip: synthesize after extract returns the kernel") {
  KernelSpec k = KernelSpec::sum(
      {KernelSpec::tensor(SpatialFactor::ultraspherical(2, 3),
                          PdFunctionSpec::gaussian(line(), 0.7)),
       KernelSpec::scale(
           0.5, KernelSpec::tensor(SpatialFactor::monomial(4),
                                   PdFunctionSpec::cosine(line(), 1.3)))});
  std::vector<GroupElement> grid = line_grid();
  SchoenbergSequence seq = extract(k, 2, 7, grid);
  for (double x : {-1.0, -0.4, 0.0, 0.6, 1.0}) {
    for (const GroupElement& u : grid) {
      SynthesisValue got = synthesize(seq, x, u);
      CHECK(std::abs(got.value - k.eval(x, u)) < 1e-11);
      CHECK(got.truncation_bound < 1e-10);
    }
  }
}

TEST_CASE("term-wise derivative matches a central difference of synthesize") {
  KernelSpec k = KernelSpec::sum(
      {KernelSpec::tensor(SpatialFactor::ultraspherical(2, 3),
                          PdFunctionSpec::gaussian(line(), 0.7)),
       KernelSpec::scale(
           0.5, KernelSpec::tensor(SpatialFactor::monomial(4),
                                   PdFunctionSpec::cosine(line(), 1.3)))});
  std::vector<GroupElement> grid = line_grid();
  const int d = 2;
  const int n_max = 7;
  SchoenbergSequence seq = extract(k, d, n_max, grid);
  const double h = 1e-5;
  for (double x : {-0.9, -0.4, 0.0, 0.6, 0.9}) {
    for (const GroupElement& u : grid) {
      std::complex<double> term_wise(0.0, 0.0);
      for (int n = 0; n <= n_max; ++n) {
        term_wise += seq.coef_at(n, u) * ultraspherical_derivative(d, n, x);
      }
      std::complex<double> fd =
          (synthesize(seq, x + h, u).value - synthesize(seq, x - h, u).value) /
          (2.0 * h);
      CHECK(std::abs(term_wise - fd) <=
            1e-6 * std::max(1.0, std::abs(term_wise)));
    }
  }
}

TEST_CASE("truncation bound covers the dropped tail") {
  // Extract c_4-supported mass with n_max = 2: everything is dropped.
  SchoenbergSequence seq = extract(single_degree(3, 4), 3, 2, line_grid());
  CHECK(seq.identity_mass == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(seq.truncation_bound == doctest::Approx(1.0).epsilon(1e-10));
  SynthesisValue sv = synthesize(seq, 0.3, GroupElement(0.0));
  // The bound is an upper bound for the actual error at every (x, u).
  double actual = std::abs(std::complex<double>(ultraspherical(3, 4, 0.3)) -
                           sv.value);
  CHECK(actual <= sv.truncation_bound + 1e-12);
}

TEST_CASE("extraction is linear in the kernel") {
  KernelSpec a = single_degree(2, 2);
  KernelSpec b = KernelSpec::tensor(SpatialFactor::monomial(1),
                                    PdFunctionSpec::gaussian(line(), 1.0));
  KernelSpec combo = KernelSpec::sum({KernelSpec::scale(2.0, a), b});
  SchoenbergSequence sa = extract(a, 2, 4, line_grid());
  SchoenbergSequence sb = extract(b, 2, 4, line_grid());
  SchoenbergSequence sc = extract(combo, 2, 4, line_grid());
  for (int n = 0; n <= 4; ++n) {
    for (const GroupElement& u : line_grid()) {
      CHECK(std::abs(sc.coef_at(n, u) -
                     (2.0 * sa.coef_at(n, u) + sb.coef_at(n, u))) < 1e-12);
    }
  }
}

TEST_CASE("raw forms go through the refinement ladder") {
  // exp(-theta^2) is analytic in x away from x = -1, and the endpoint kink
  // there is damped by exp(-pi^2), so the ladder converges well inside its
  // node cap.
  KernelSpec k =
      KernelSpec::tensor(SpatialFactor::powered_exponential(1.0, 2.0),
                         PdFunctionSpec::exp_decay(line(), 1.0));
  std::vector<GroupElement> grid = {GroupElement(0.0), GroupElement(1.0)};
  SchoenbergSequence seq = extract(k, 2, 12, grid);
  // Partial sums reproduce the kernel up to the truncation bound.
  for (double x : {-0.8, 0.1, 0.9}) {
    for (const GroupElement& u : grid) {
      SynthesisValue sv = synthesize(seq, x, u);
      CHECK(std::abs(sv.value - k.eval(x, u)) <=
            sv.truncation_bound + 1e-8);
    }
  }
  // Identity mass plus tail accounts for f(1, e) = 1.
  CHECK(seq.identity_mass <= 1.0 + 1e-10);
  CHECK(seq.identity_mass + seq.truncation_bound >= 1.0 - 1e-6);
  // The sphere Gaussian is a classical non-member: some expansion
  // coefficients must come out negative, and the diagnostics say so.
  CHECK_FALSE(seq.diagnostics.certifying);
  CHECK_FALSE(seq.diagnostics.negative_identity.empty());
}

TEST_CASE("a ladder that cannot converge reports the failure") {
  // theta^1 in the exponent leaves an arccos kink at x = 1; quadrature
  // converges only algebraically, so the capped ladder must refuse rather
  // than return low-accuracy coefficients.
  GneitingParams params;
  params.a = 1.0;
  params.alpha = 1.0;
  params.beta = 1.0;
  params.gamma = 1.0;
  params.tau = 1.5;
  params.c = 1.0;
  KernelSpec k = KernelSpec::gneiting(line(), params);
  std::vector<GroupElement> grid = {GroupElement(0.0), GroupElement(1.0)};
  CHECK_THROWS_AS(extract(k, 2, 12, grid), numerical_error);
}

TEST_CASE("step up matches an independent extraction two dimensions up") {
  KernelSpec k = KernelSpec::sum(
      {single_degree(1, 3),
       KernelSpec::scale(0.25, KernelSpec::tensor(
                                   SpatialFactor::monomial(2),
                                   PdFunctionSpec::exp_decay(line(), 0.5)))});
  for (int d : {1, 2, 3}) {
    SchoenbergSequence low = extract(k, d, 10, line_grid());
    SchoenbergSequence up = step_up(low);
    CHECK(up.d == d + 2);
    CHECK(up.n_max == 8);
    SchoenbergSequence direct = extract(k, d + 2, 8, line_grid());
    for (int n = 0; n <= 8; ++n) {
      for (const GroupElement& u : line_grid()) {
        CHECK(std::abs(up.coef_at(n, u) - direct.coef_at(n, u)) < 1e-10);
      }
    }
  }
}

TEST_CASE("step up flags membership loss with a negative identity value") {
  // c_2(1, x) = cos(2 theta) is PD on the circle but not on S^3. Built
  // parametrically, the recurrence arithmetic is exact.
  SchoenbergSequence seq;
  seq.basis = ExpansionBasis::Ultraspherical;
  seq.d = 1;
  seq.n_max = 2;
  seq.group = line();
  seq.entries.emplace(
      2, CoefficientFn::parametric(1.0, PdFunctionSpec::exp_decay(line(), 1.0)));
  finalize_sequence(seq);
  REQUIRE(seq.diagnostics.certifying);

  SchoenbergSequence up = step_up(seq);
  CHECK(up.d == 3);
  std::complex<double> at_e = up.coef_at(0, GroupElement(0.0));
  CHECK(at_e.real() == -0.5);  // exact: weights are rational arithmetic
  CHECK_FALSE(up.diagnostics.certifying);
  REQUIRE(up.diagnostics.negative_identity.size() == 1);
  CHECK(up.diagnostics.negative_identity[0].first == 0);
  // The dropped degree-2 output entry is covered by the bound.
  CHECK(up.truncation_bound >= 1.5 - 1e-12);
  CHECK_THROWS_AS(step_up(up), std::domain_error);  // n_max would go negative
}

TEST_CASE("power sequences and finite-dimensional projection agree") {
  KernelSpec k = KernelSpec::sum(
      {KernelSpec::tensor(SpatialFactor::monomial(3),
                          PdFunctionSpec::exp_decay(line(), 1.0)),
       KernelSpec::tensor(SpatialFactor::scaled_shift(),
                          PdFunctionSpec::gaussian(line(), 0.4))});
  SchoenbergSequence powers = power_sequence(k);
  CHECK(powers.basis == ExpansionBasis::Monomial);
  CHECK(powers.n_max == 3);
  for (int d : {1, 2, 3, 5}) {
    SchoenbergSequence projected = project_from_infty(powers, d);
    CHECK(projected.d == d);
    SchoenbergSequence direct = extract(k, d, 3, line_grid());
    for (int n = 0; n <= 3; ++n) {
      for (const GroupElement& u : line_grid()) {
        CHECK(std::abs(projected.coef_at(n, u) - direct.coef_at(n, u)) <
              1e-12);
      }
    }
    // Convex row weights conserve identity mass.
    CHECK(projected.identity_mass ==
          doctest::Approx(powers.identity_mass).epsilon(1e-12));
  }
}

TEST_CASE("projection weights for the cube on the circle") {
  SchoenbergSequence powers;
  powers.basis = ExpansionBasis::Monomial;
  powers.n_max = 3;
  powers.group = line();
  powers.entries.emplace(
      3, CoefficientFn::parametric(1.0, PdFunctionSpec::constant(line(), 1.0)));
  finalize_sequence(powers);
  SchoenbergSequence on_circle = project_from_infty(powers, 1);
  CHECK(on_circle.coef_at(1, GroupElement(0.0)).real() ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK(on_circle.coef_at(3, GroupElement(0.0)).real() ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(on_circle.coef_at(0, GroupElement(0.0))) == 0.0);
  CHECK_THROWS_AS(project_from_infty(on_circle, 3), std::domain_error);
}

TEST_CASE("dimension-free limit gap decays like 1/d") {
  KernelSpec k = KernelSpec::tensor(SpatialFactor::monomial(2),
                                    PdFunctionSpec::exp_decay(line(), 1.0));
  GroupElement u(0.5);
  double prev = 1e9;
  for (int d : {1, 3, 7, 15, 31}) {
    double gap = infty_limit_gap(k, 2, u, d);
    // phi_{2,d}(u) = d/(d+1) e^{-1/2} against the limit e^{-1/2}.
    double want = std::exp(-0.5) / (d + 1.0);
    CHECK(gap == doctest::Approx(want).epsilon(1e-9));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("product-sphere tables recover separable polynomial factors") {
  BivariateSpec f2 = BivariateSpec::separable(
      {{1.0, SpatialFactor::monomial(2), SpatialFactor::monomial(2)}});
  SUBCASE("circle times circle") {
    ProductSphereCoefficients c = product_sphere_extract(f2, 1, 1, 4, 4);
    for (int n = 0; n <= 4; ++n) {
      for (int m = 0; m <= 4; ++m) {
        double want = (n <= 2 && m <= 2 && n % 2 == 0 && m % 2 == 0)
                          ? monomial_connection_value(1, 2, (2 - n) / 2) *
                                monomial_connection_value(1, 2, (2 - m) / 2)
                          : 0.0;
        CHECK(c.at(n, m) == doctest::Approx(want).epsilon(1e-12));
      }
    }
    CHECK(c.mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.certifying);
  }
  SUBCASE("monomial axis against a 2-sphere") {
    ProductSphereCoefficients c = product_sphere_extract_infty(f2, 2, 4, 4);
    CHECK(c.d_infinite);
    // x^2 stays put; y^2 = (2/3) c_0 + ... on S^2: gamma^{(2)}(2, .) rows.
    CHECK(c.at(2, 0) ==
          doctest::Approx(monomial_connection_value(2, 2, 1)).epsilon(1e-12));
    CHECK(c.at(2, 2) ==
          doctest::Approx(monomial_connection_value(2, 2, 0)).epsilon(1e-12));
    CHECK(c.at(0, 0) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(c.mass == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("synthesis inverts the table") {
    ProductSphereCoefficients c = product_sphere_extract(f2, 2, 3, 4, 4);
    for (double x : {-0.7, 0.2, 1.0}) {
      for (double y : {-1.0, 0.4, 0.9}) {
        CHECK(product_sphere_synthesize(c, x, y) ==
              doctest::Approx(f2.eval(x, y)).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("raw bivariate forms refine until stable") {
  // exp((x + y)/2) factors into two functions with positive expansion
  // coefficients that decay factorially, so 10 degrees are plenty.
  BivariateSpec f2 = BivariateSpec::raw(
      [](double x, double y) { return std::exp(0.5 * (x + y)); },
      "exp-half-sum");
  ProductSphereCoefficients c = product_sphere_extract(f2, 2, 2, 10, 10);
  CHECK(c.certifying);
  for (double x : {-0.5, 0.3, 0.9}) {
    for (double y : {-0.8, 0.0, 0.7}) {
      CHECK(product_sphere_synthesize(c, x, y) ==
            doctest::Approx(f2.eval(x, y)).epsilon(1e-9));
    }
  }
  // An indefinite f2 must produce a negative entry certificate rather than
  // a silent clamp.
  BivariateSpec bad = BivariateSpec::separable(
      {{1.0, SpatialFactor::ultraspherical(1, 2), SpatialFactor::monomial(0)},
       {-0.2, SpatialFactor::monomial(0), SpatialFactor::monomial(0)}});
  ProductSphereCoefficients cb = product_sphere_extract(bad, 1, 1, 3, 3);
  CHECK_FALSE(cb.certifying);
  REQUIRE(!cb.negative_entries.empty());
  CHECK(cb.negative_entries[0].first == std::make_pair(0, 0));
  CHECK(cb.negative_entries[0].second == doctest::Approx(-0.2).epsilon(1e-10));
  CHECK(cb.min_entry == doctest::Approx(-0.2).epsilon(1e-10));
}

TEST_CASE("infty product extraction rejects non-power x factors") {
  BivariateSpec f2 = BivariateSpec::separable(
      {{1.0, SpatialFactor::ultraspherical(2, 2), SpatialFactor::monomial(2)}});
  CHECK_THROWS_AS(product_sphere_extract_infty(f2, 2, 4, 4),
                  std::domain_error);
  BivariateSpec opaque =
      BivariateSpec::raw([](double, double) { return 1.0; }, "flat");
  CHECK_THROWS_AS(product_sphere_extract_infty(opaque, 2, 4, 4),
                  std::domain_error);
}

TEST_CASE("sampled sequences support the same synthesis path") {
  // Push a sampled profile through synthesize to cover the numeric branch.
  std::vector<GroupElement> grid = line_grid();
  SchoenbergSequence seq = extract(single_degree(2, 2), 2, 4, grid);
  const CoefficientFn* entry = seq.entry(2);
  REQUIRE(entry != nullptr);
  CHECK(entry->is_sampled());
  SynthesisValue sv = synthesize(seq, 0.4, GroupElement(0.5));
  CHECK(std::abs(sv.value -
                 ultraspherical(2, 2, 0.4) * std::exp(-0.5)) < 1e-12);
  // Off-grid lookups have no interpolation to hide behind.
  CHECK_THROWS_AS(synthesize(seq, 0.4, GroupElement(0.123)),
                  std::domain_error);
}
