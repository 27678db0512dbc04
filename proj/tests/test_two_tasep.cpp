#include <gtest/gtest.h>

#include <cmath>

#include <masep/oracle.hpp>
#include <masep/two_tasep.hpp>

using namespace masep;

namespace {

ParticleConfig two(std::vector<std::int64_t> pos, std::vector<int> p) {
  return ParticleConfig::two_species(std::move(pos), p);
}

double oracle(const ParticleConfig& a, const ParticleConfig& b, double t) {
  return expm_transition(a, b, 0.0, t).value;
}

}  // namespace

TEST(Green, TwoSpeciesGolden) {
  auto r = two_tasep_green(two({0, 1}, {1}), two({1, 2}, {2}), 1.0);
  EXPECT_NEAR(r.value, 0.067667641618306337, 1e-10);
  EXPECT_EQ(r.method, "quadrature");
}

TEST(Green, SingleParticleIsPoisson) {
  auto r = two_tasep_green(two({0}, {}), two({2}, {}), 1.0);
  EXPECT_NEAR(r.value, std::exp(-1.0) / 2.0, 1e-14);
  EXPECT_EQ(r.method, "laurent");
}

TEST(Green, MatchesOracle) {
  struct Case {
    ParticleConfig a, b;
    double t;
  };
  std::vector<Case> cases{
      {two({0, 1}, {1}), two({0, 2}, {1}), 0.8},
      {two({0, 1}, {2}), two({1, 2}, {1}), 1.0},
      {two({0, 2}, {1}), two({2, 3}, {1}), 1.3},
      {two({0, 1, 2}, {1}), two({1, 2, 4}, {3}), 1.0},
      {two({-1, 0, 1}, {1, 2}), two({0, 2, 3}, {2, 3}), 1.1},
  };
  for (std::size_t k = 0; k < cases.size(); ++k) {
    auto& c = cases[k];
    EXPECT_NEAR(two_tasep_green(c.a, c.b, c.t).value, oracle(c.a, c.b, c.t), 1e-9) << "case " << k;
  }
}

TEST(Green, FastPathAgreesWithFullIntegral) {
  auto a = two({0, 1}, {1}), b = two({1, 3}, {2});
  EvalOptions slow;
  slow.fast_path = false;
  EXPECT_NEAR(two_tasep_green(a, b, 1.2).value, two_tasep_green(a, b, 1.2, slow).value, 1e-10);
}

TEST(Green, ReducesToOneSpeciesDeterminant) {
  auto c1 = schutz_reduction_check(two({0, 2, 3}, {}), two({1, 4, 6}, {}), 1.7);
  EXPECT_LT(c1.abs_error, 1e-10);
  EXPECT_GT(c1.reference, 1e-4);
  auto c2 = schutz_reduction_check(two({0, 1}, {1, 2}), two({2, 3}, {1, 2}), 1.0);
  EXPECT_LT(c2.abs_error, 1e-10);
}

TEST(Green, OneSpeciesDeterminantMatchesOracle) {
  auto a = two({0, 1, 2}, {}), b = two({1, 3, 4}, {});
  EXPECT_NEAR(schutz_determinant(a.positions(), b.positions(), 1.5), oracle(a, b, 1.5), 1e-12);
}

TEST(Green, ZeroTimeIsDelta) {
  auto a = two({0, 1}, {1});
  EXPECT_NEAR(two_tasep_green(a, a, 0.0).value, 1.0, 1e-10);
  EXPECT_NEAR(two_tasep_green(a, two({0, 1}, {2}), 0.0).value, 0.0, 1e-10);
}

TEST(Green, ShapeValidation) {
  EXPECT_THROW(two_tasep_green(two({0, 1}, {1}), two({0, 1, 2}, {1}), 1.0), ValidationError);
  EXPECT_THROW(two_tasep_green(two({0, 1}, {1}), two({0, 1}, {1, 2}), 1.0), ValidationError);
  EXPECT_THROW(two_tasep_green(two({0, 1}, {1}), two({1, 2}, {1}), -1.0), ValidationError);
  EvalOptions exact;
  exact.method = Method::laurent;
  EXPECT_THROW(two_tasep_green(two({0, 1}, {1}), two({1, 2}, {2}), 1.0, exact), ValidationError);
}

TEST(Green, ContourValidation) {
  EvalOptions bad;
  bad.fast_path = false;
  bad.u_radius = 0.3;
  EXPECT_THROW(two_tasep_green(two({0, 1}, {2}), two({1, 2}, {1}), 1.0, bad), ConfigurationError);
}

TEST(Crossing, AgreesWithGreenAndOracle) {
  struct Case {
    ParticleConfig a, b;
    double t;
  };
  std::vector<Case> cases{
      {two({0, 1}, {1}), two({1, 3}, {2}), 1.0},
      {two({0, 1, 2}, {1}), two({1, 2, 4}, {3}), 1.4},
      {two({0, 1, 2}, {1, 2}), two({0, 2, 3}, {2, 3}), 1.2},
  };
  for (std::size_t k = 0; k < cases.size(); ++k) {
    auto& c = cases[k];
    double ref = oracle(c.a, c.b, c.t);
    EXPECT_NEAR(two_tasep_crossing(c.a, c.b, c.t).value, ref, 1e-10) << "case " << k;
    EXPECT_NEAR(two_tasep_green(c.a, c.b, c.t).value, ref, 1e-9) << "case " << k;
  }
}

TEST(Crossing, ExactAndQuadratureAgree) {
  auto a = two({0, 1, 2}, {1}), b = two({2, 3, 5}, {3});
  EvalOptions quad;
  quad.method = Method::quadrature;
  auto exact = two_tasep_crossing(a, b, 1.5);
  EXPECT_EQ(exact.method, "laurent");
  EXPECT_NEAR(exact.value, two_tasep_crossing(a, b, 1.5, quad).value, 1e-10);
}

TEST(Crossing, RequiresCrossingIndices) {
  EXPECT_THROW(two_tasep_crossing(two({0, 1}, {2}), two({1, 2}, {2}), 1.0), ValidationError);
  EXPECT_THROW(two_tasep_crossing(two({0, 1}, {1}), two({1, 2}, {1}), 1.0), ValidationError);
}
