#include <gtest/gtest.h>

#include <cmath>

#include <masep/formula_common.hpp>
#include <masep/quadrature.hpp>
#include <masep/separable.hpp>

using namespace masep;

TEST(Circle, ResidueOfSimplePole) {
  auto f = [](cplx z) { return 1.0 / z; };
  EXPECT_LT(std::abs(circle_integrate(f, Contour{0.0, 0.5, +1}, 16) - cplx(1.0)), 1e-14);
  EXPECT_LT(std::abs(circle_integrate(f, Contour{0.0, 0.5, -1}, 16) - cplx(-1.0)), 1e-14);
}

TEST(Circle, AnalyticIntegrandVanishes) {
  auto f = [](cplx z) { return std::exp(z) * z * z; };
  EXPECT_LT(std::abs(circle_integrate(f, Contour{0.3, 0.4, +1}, 64)), 1e-14);
}

TEST(Circle, InvalidContourRejected) {
  auto f = [](cplx z) { return z; };
  EXPECT_THROW(circle_integrate(f, Contour{0.0, -1.0, +1}, 8), ConfigurationError);
  EXPECT_THROW(circle_integrate(f, Contour{0.0, 1.0, 2}, 8), ConfigurationError);
  EXPECT_THROW(circle_integrate(f, Contour{0.0, 1.0, 1}, 0), ConfigurationError);
}

TEST(Product, ExponentialResidue) {
  // Residue of e^{tz}/z^3 at 0 is t^2/2.
  auto f = [](std::span<const cplx> z) { return std::exp(1.5 * z[0]) / (z[0] * z[0] * z[0]); };
  auto r = product_integrate(f, {Contour{0.0, 0.45, +1}});
  EXPECT_LT(std::abs(r.value - cplx(1.125)), 1e-12);
  EXPECT_LT(r.error, 1e-12);
}

TEST(Product, NestedCirclesSeeInnerPole) {
  // The inner integral leaves 1/z2; the outer one then gives 1.
  auto contours = geometric_circles(2, 0.2, 3.0);
  ASSERT_DOUBLE_EQ(contours[1].radius, 0.6);
  auto f = [](std::span<const cplx> z) { return 1.0 / ((z[1] - z[0]) * z[0]); };
  auto r = product_integrate(f, contours);
  EXPECT_LT(std::abs(r.value - cplx(1.0)), 1e-12);
}

TEST(Product, ZeroDimensionEvaluatesOnce) {
  auto f = [](std::span<const cplx> z) { return cplx(double(z.size()) + 2.0); };
  auto r = product_integrate(f, {});
  EXPECT_EQ(r.value, cplx(2.0));
}

TEST(Product, DimensionLimit) {
  QuadratureOptions opt;
  opt.max_dimension = 2;
  auto f = [](std::span<const cplx>) { return cplx(1.0); };
  EXPECT_THROW(product_integrate(f, geometric_circles(3, 0.2, 2.0), opt), ResourceLimitError);
}

TEST(Product, UnreachableToleranceCarriesBestEstimate) {
  QuadratureOptions opt;
  opt.tol = 0.0;
  opt.max_nodes = 64;
  auto f = [](std::span<const cplx> z) { return 1.0 / (z[0] - 0.449); };
  try {
    product_integrate(f, {Contour{0.0, 0.45, +1}}, opt);
    FAIL() << "expected an accuracy error";
  } catch (const QuadratureAccuracyError& e) {
    EXPECT_EQ(e.best.nodes, 64);
  }
}

TEST(Laurent, DoublePoleWithExponential) {
  LaurentDescriptor d;
  d.exp_rate = 2.0;
  d.z_power = -2;
  d.poles = {0.0};
  EXPECT_LT(std::abs(laurent_residue(d) - cplx(2.0)), 1e-14);
}

TEST(Laurent, AgreesWithQuadrature) {
  LaurentDescriptor d;
  d.coefficient = 0.7;
  d.exp_rate = 1.3;
  d.z_power = -3;
  d.factors = {{cplx(1.0), -2.0}, {cplx(2.5), 1.0}};
  d.poles = {0.0, 1.0};
  auto f = [&](std::span<const cplx> zs) {
    cplx z = zs[0];
    return d.coefficient * std::exp(d.exp_rate * z) * std::pow(z, -3) / ((z - 1.0) * (z - 1.0)) * (z - 2.5);
  };
  auto q = product_integrate(f, {Contour{0.5, 1.0, +1}});
  EXPECT_LT(std::abs(laurent_residue(d) - q.value), 1e-11);
}

TEST(Laurent, NonIntegerOrderRejected) {
  LaurentDescriptor d;
  d.z_power = -1.5;
  d.poles = {0.0};
  EXPECT_THROW(laurent_residue(d), UnsupportedDescriptor);
  LaurentDescriptor dup;
  dup.z_power = -1;
  dup.poles = {0.0, 0.0};
  EXPECT_THROW(laurent_residue(dup), UnsupportedDescriptor);
}

TEST(Separable, DeterminantMatchesDirectIntegration) {
  using S = SeparableSum;
  std::vector<std::vector<S>> m{{S::monomial(2, 0, 1, 1), S::monomial(2, 1, 0, 2)},
                                {S::monomial(2, 0, 0, 1, 2.0), S::monomial(2, 1, 2, 1)}};
  auto det = separable_determinant(m, 2);
  auto one_dim = [](int, int a, int b) {
    auto f = [a, b](cplx x) { return std::pow(x, a - 3) * std::pow(1.0 - x, b); };
    return circle_integrate(f, Contour{0.0, 0.5, +1}, 64);
  };
  auto direct = [](std::span<const cplx> z) {
    cplx a = z[0] * (1.0 - z[0]), b = (1.0 - z[1]) * (1.0 - z[1]);
    cplx c = 2.0 * (1.0 - z[0]), d = z[1] * z[1] * (1.0 - z[1]);
    return (a * d - b * c) * std::pow(z[0], -3) * std::pow(z[1], -3);
  };
  auto q = product_integrate(direct, geometric_circles(2, 0.5, 1.0));
  EXPECT_GT(std::abs(q.value), 0.1);
  EXPECT_LT(std::abs(det.integrate(one_dim) - q.value), 1e-12);
}

TEST(Kernels, OriginExpAgreesWithQuadrature) {
  auto f = [](std::span<const cplx> x) { return std::exp((1.0 / x[0] - 1.0) * 1.2) * std::pow(x[0], 1); };
  auto q = product_integrate(f, {Contour{0.0, 0.45, +1}});
  EXPECT_LT(std::abs(kernels::origin_exp(1.2, 1, 0) - q.value), 1e-12);
}
