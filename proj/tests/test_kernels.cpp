#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sphk/kernels.hpp"

using namespace sphk;

namespace {

PdFunctionSpec line_decay(double a = 1.0) {
  return PdFunctionSpec::exp_decay(GroupModel::real_line(), a);
}

std::vector<SpaceTimePoint> orthogonal_frame(int count) {
  std::vector<SpaceTimePoint> pts;
  for (int i = 0; i < count; ++i) {
    std::vector<double> xi(count, 0.0);
    xi[i] = 1.0;
    pts.push_back({xi, GroupElement(0.0)});
  }
  return pts;
}

}  // namespace

TEST_CASE("spatial factors evaluate their closed forms") {
  CHECK(SpatialFactor::ultraspherical(2, 2).eval(0.5) ==
        doctest::Approx(oracle::legendre(2, 0.5)).epsilon(1e-15));
  CHECK(SpatialFactor::monomial(3).eval(-0.5) == -0.125);
  CHECK(SpatialFactor::scaled_shift().eval(0.2) ==
        doctest::Approx(0.6).epsilon(1e-15));
  SpatialFactor pe = SpatialFactor::powered_exponential(2.0, 1.0);
  CHECK(pe.eval(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pe.eval(std::cos(0.5)) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(SpatialFactor::monomial(-1), std::domain_error);
  CHECK_THROWS_AS(SpatialFactor::ultraspherical(0, 2), std::domain_error);
  CHECK_THROWS_AS(SpatialFactor::powered_exponential(0.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(SpatialFactor::powered_exponential(1.0, 2.5),
                  std::domain_error);
}

TEST_CASE("spatial metadata: degree, power coefficients, certification") {
  CHECK(SpatialFactor::ultraspherical(3, 4).degree() == 4);
  CHECK(SpatialFactor::monomial(5).degree() == 5);
  CHECK(SpatialFactor::scaled_shift().degree() == 1);
  CHECK_FALSE(SpatialFactor::powered_exponential(1, 1).degree().has_value());

  auto mono = SpatialFactor::monomial(2).monomial_coeffs();
  REQUIRE(mono.has_value());
  CHECK(*mono == std::vector<double>{0.0, 0.0, 1.0});
  auto shift = SpatialFactor::scaled_shift().monomial_coeffs();
  REQUIRE(shift.has_value());
  CHECK(*shift == std::vector<double>{0.5, 0.5});
  CHECK_FALSE(
      SpatialFactor::ultraspherical(2, 2).monomial_coeffs().has_value());

  CHECK(SpatialFactor::monomial(7).certified_dimension() == kAllDimensions);
  CHECK(SpatialFactor::scaled_shift().certified_dimension() ==
        kAllDimensions);
  CHECK(SpatialFactor::ultraspherical(3, 0).certified_dimension() ==
        kAllDimensions);
  CHECK(SpatialFactor::ultraspherical(3, 1).certified_dimension() ==
        kAllDimensions);
  CHECK(SpatialFactor::ultraspherical(3, 2).certified_dimension() == 3);
  CHECK_FALSE(SpatialFactor::powered_exponential(1, 1)
                  .certified_dimension()
                  .has_value());
}

TEST_CASE("tensor kernels multiply their halves") {
  KernelSpec k = KernelSpec::tensor(SpatialFactor::monomial(3), line_decay(2.0));
  CHECK(k.eval(0.5, GroupElement(1.0)).real() ==
        doctest::Approx(0.125 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(k.eval(0.5, GroupElement(1.0)).imag() == 0.0);
  CHECK(k.spatial_degree() == 3);
  CHECK(k.is_band_limited());
  CHECK(k.certified_dimension() == kAllDimensions);
  CHECK(kernel_eval(k, 0.5, GroupElement(1.0)) ==
        k.eval(0.5, GroupElement(1.0)));
}

TEST_CASE("sum, scale, product evaluate componentwise") {
  KernelSpec a = KernelSpec::tensor(SpatialFactor::monomial(2), line_decay());
  KernelSpec b =
      KernelSpec::tensor(SpatialFactor::scaled_shift(),
                         PdFunctionSpec::gaussian(GroupModel::real_line(), 1.0));
  GroupElement u(0.7);
  double x = -0.3;

  KernelSpec s = KernelSpec::sum({a, b});
  CHECK(s.eval(x, u) == a.eval(x, u) + b.eval(x, u));
  CHECK(s.spatial_degree() == 2);

  KernelSpec p = KernelSpec::product({a, b});
  CHECK(p.eval(x, u) == a.eval(x, u) * b.eval(x, u));
  CHECK(p.spatial_degree() == 3);

  KernelSpec half = KernelSpec::scale(0.5, s);
  CHECK(half.eval(x, u) == 0.5 * s.eval(x, u));
  KernelSpec zero = KernelSpec::scale(0.0, s);
  CHECK(zero.eval(x, u) == std::complex<double>(0.0, 0.0));
  CHECK_THROWS_AS(KernelSpec::scale(-0.1, s), std::domain_error);
}

TEST_CASE("construction enforces group agreement") {
  KernelSpec on_line =
      KernelSpec::tensor(SpatialFactor::monomial(1), line_decay());
  KernelSpec on_z = KernelSpec::tensor(
      SpatialFactor::monomial(1),
      PdFunctionSpec::exp_decay(GroupModel::integers(), 1.0));
  CHECK_THROWS_AS(KernelSpec::sum({on_line, on_z}), std::domain_error);
  CHECK_THROWS_AS(KernelSpec::product({on_line, on_z}), std::domain_error);
  CHECK_THROWS_AS(KernelSpec::sum({}), std::domain_error);
  CHECK_THROWS_AS(KernelSpec::product({}), std::domain_error);
  CHECK_THROWS_AS(on_line.eval(0.0, GroupElement(std::int64_t{2})),
                  std::domain_error);
}

TEST_CASE("certification flows through the tree") {
  PdFunctionSpec phi = line_decay();
  KernelSpec everywhere =
      KernelSpec::tensor(SpatialFactor::scaled_shift(), phi);
  KernelSpec only_d3 =
      KernelSpec::tensor(SpatialFactor::ultraspherical(3, 2), phi);
  KernelSpec unknown = KernelSpec::tensor(
      SpatialFactor::powered_exponential(1.0, 1.0), phi);

  CHECK(KernelSpec::sum({everywhere, only_d3}).certified_dimension() == 3);
  CHECK(KernelSpec::scale(2.0, only_d3).certified_dimension() == 3);
  CHECK(KernelSpec::product({everywhere, everywhere}).certified_dimension() ==
        kAllDimensions);
  CHECK_FALSE(
      KernelSpec::sum({everywhere, unknown}).certified_dimension().has_value());
  CHECK_FALSE(KernelSpec::gneiting(GroupModel::real_line(), GneitingParams{})
                  .certified_dimension()
                  .has_value());

  // A temporal factor with no PD guarantee poisons certification too.
  PdFunctionSpec raw = PdFunctionSpec::unchecked(
      GroupModel::real_line(),
      [](const GroupElement&) { return std::complex<double>(1.0, 0.0); },
      "flat");
  CHECK_FALSE(KernelSpec::tensor(SpatialFactor::monomial(2), raw)
                  .certified_dimension()
                  .has_value());
}

TEST_CASE("raw closed form evaluates its formula") {
  GneitingParams params;
  params.a = 2.0;
  params.alpha = 1.5;
  params.beta = 1.0;
  params.gamma = 1.0;
  params.tau = 2.0;
  params.c = 0.5;
  KernelSpec k = KernelSpec::gneiting(GroupModel::real_line(), params);
  double t = 0.8;
  double theta = std::acos(0.3);
  double h = 1.0 + 2.0 * std::pow(t, 1.5);
  double want = std::pow(h, -2.0) * std::exp(-0.5 * theta / std::sqrt(h));
  CHECK(k.eval(0.3, GroupElement(t)).real() ==
        doctest::Approx(want).epsilon(1e-14));
  CHECK_FALSE(k.is_band_limited());
  CHECK(k.eval(1.0, GroupElement(0.0)).real() ==
        doctest::Approx(1.0).epsilon(1e-15));

  GneitingParams bad = params;
  bad.alpha = 2.5;
  CHECK_THROWS_AS(KernelSpec::gneiting(GroupModel::real_line(), bad),
                  std::domain_error);
}

TEST_CASE("power-series view of monomial trees") {
  KernelSpec k = KernelSpec::sum(
      {KernelSpec::scale(2.0, KernelSpec::tensor(SpatialFactor::monomial(2),
                                                 line_decay(1.0))),
       KernelSpec::tensor(SpatialFactor::scaled_shift(), line_decay(3.0))});
  std::map<int, CoefficientFn> profile = k.monomial_profile();
  REQUIRE(profile.size() == 3);
  GroupElement u(0.4);
  CHECK(profile.at(0).eval(u).real() ==
        doctest::Approx(0.5 * std::exp(-1.2)).epsilon(1e-14));
  CHECK(profile.at(1).eval(u).real() ==
        doctest::Approx(0.5 * std::exp(-1.2)).epsilon(1e-14));
  CHECK(profile.at(2).eval(u).real() ==
        doctest::Approx(2.0 * std::exp(-0.4)).epsilon(1e-14));

  // Reconstruction: sum_j profile_j(u) x^j == k(x, u).
  for (double x : {-0.9, 0.1, 0.8}) {
    std::complex<double> rebuilt = 0.0;
    for (const auto& [deg, fn] : profile) {
      rebuilt += fn.eval(u) * std::pow(x, deg);
    }
    CHECK(std::abs(rebuilt - k.eval(x, u)) < 1e-14);
  }

  KernelSpec not_power =
      KernelSpec::tensor(SpatialFactor::ultraspherical(2, 2), line_decay());
  CHECK_THROWS_AS(not_power.monomial_profile(), std::domain_error);
  CHECK_THROWS_AS(
      KernelSpec::gneiting(GroupModel::real_line(), GneitingParams{})
          .monomial_profile(),
      std::domain_error);
}

TEST_CASE("gram matrix on an orthogonal frame is the identity") {
  KernelSpec k = KernelSpec::tensor(SpatialFactor::monomial(1), line_decay());
  Eigen::MatrixXcd gram = kernel_gram(k, orthogonal_frame(4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      std::complex<double> want = (i == j) ? 1.0 : 0.0;
      CHECK(std::abs(gram(i, j) - want) < 1e-15);
    }
  }
}

TEST_CASE("gram assembly is Hermitian only because the kernel is") {
  GroupModel line = GroupModel::real_line();
  KernelSpec k = KernelSpec::tensor(
      SpatialFactor::scaled_shift(),
      PdFunctionSpec::character_mix(line, {{1.0, {1.3}}, {0.5, {-0.4}}}));
  std::mt19937_64 engine(3);
  std::normal_distribution<double> normal;
  std::vector<SpaceTimePoint> pts;
  for (int i = 0; i < 6; ++i) {
    std::vector<double> xi(3);
    double norm = 0.0;
    for (double& c : xi) {
      c = normal(engine);
      norm += c * c;
    }
    norm = std::sqrt(norm);
    for (double& c : xi) c /= norm;
    pts.push_back({xi, GroupElement(normal(engine))});
  }
  Eigen::MatrixXcd gram = kernel_gram(k, pts);
  double gap = (gram - gram.adjoint()).cwiseAbs().maxCoeff();
  CHECK(gap < 1e-12);
  for (int i = 0; i < 6; ++i) {
    CHECK(gram(i, i).real() == doctest::Approx(1.5).epsilon(1e-12));
  }
}

TEST_CASE("gram rejects off-sphere points and foreign group elements") {
  KernelSpec k = KernelSpec::tensor(SpatialFactor::monomial(1), line_decay());
  // Tiny norm drift is renormalized silently.
  std::vector<SpaceTimePoint> ok = {{{1.0 + 5e-11, 0.0}, GroupElement(0.0)},
                                    {{0.0, 1.0}, GroupElement(1.0)}};
  CHECK_NOTHROW(kernel_gram(k, ok));
  std::vector<SpaceTimePoint> off = {{{0.5, 0.0}, GroupElement(0.0)}};
  CHECK_THROWS_AS(kernel_gram(k, off), std::domain_error);
  std::vector<SpaceTimePoint> foreign = {
      {{1.0, 0.0}, GroupElement(std::int64_t{1})}};
  CHECK_THROWS_AS(kernel_gram(k, foreign), std::domain_error);
  CHECK_THROWS_AS(kernel_gram(k, {}), std::domain_error);
}

TEST_CASE("bivariate specs") {
  BivariateSpec f2 = BivariateSpec::separable(
      {{1.0, SpatialFactor::monomial(2), SpatialFactor::monomial(2)},
       {0.5, SpatialFactor::scaled_shift(), SpatialFactor::monomial(0)}});
  CHECK(f2.eval(0.5, -0.5) ==
        doctest::Approx(0.25 * 0.25 + 0.5 * 0.75).epsilon(1e-15));
  CHECK(f2.degree_x() == 2);
  CHECK(f2.degree_y() == 2);
  CHECK(f2.is_band_limited());
  CHECK(f2.is_separable());

  BivariateSpec opaque = BivariateSpec::raw(
      [](double x, double y) { return std::exp(x * y); }, "exp-product");
  CHECK(opaque.eval(0.5, 0.5) ==
        doctest::Approx(std::exp(0.25)).epsilon(1e-15));
  CHECK_FALSE(opaque.is_band_limited());
  CHECK_FALSE(opaque.is_separable());
  CHECK_THROWS_AS(BivariateSpec::separable({}), std::domain_error);
}
