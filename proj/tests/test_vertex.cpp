#include <gtest/gtest.h>

#include <cmath>

#include <masep/vertex_suite.hpp>

using namespace masep;

namespace {

void expect_pass(const CheckReport& r) {
  EXPECT_TRUE(r.pass) << r.name << ": max error " << r.max_error << " vs " << r.threshold << " " << r.detail;
  EXPECT_GT(r.cases, 0) << r.name;
}

}  // namespace

TEST(Weights, SumToUnity) { expect_pass(vertex_sum_to_unity()); }

TEST(Weights, SumToUnityAtSeveralParameters) {
  expect_pass(stochastic_weights_check(2, 3, {{0.1, 2.0, 0.3}, {cplx(0.2, 0.1), 0.5, cplx(-0.4, 0.2)}}));
}

TEST(Weights, PerturbedTableFails) {
  auto r = vertex_sum_to_unity(20, 31, WeightPerturbation{{1, 0}, 2, {0, 1}, 1, 1.01});
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_error, 1e-3);
}

TEST(Weights, PositiveInStochasticRegime) { expect_pass(positivity_check(2, 2, {0.1, 2.0, 0.3})); }

TEST(Weights, ColourStateCount) {
  // Compositions of at most 2 into 2 parts: 1 + 2 + 3.
  EXPECT_EQ(colour_states(2, 2).size(), 6u);
  EXPECT_EQ(colour_states(1, 4).size(), 5u);
}

TEST(Functions, FactorsAtBoundary) { expect_pass(f_factor_check()); }

TEST(Functions, BlockFactorization) { expect_pass(block_factorization_check()); }

TEST(Functions, Stability) { expect_pass(stability_check()); }

TEST(Functions, SymmetrizedSum) { expect_pass(f_to_F_check()); }

TEST(Functions, DeterminantForm) { expect_pass(sfF_determinant_check()); }

TEST(Integrals, Orthogonality) { expect_pass(orthogonality_check()); }

TEST(Integrals, CauchyIdentity) { expect_pass(cauchy_identity_check()); }

TEST(Integrals, AdmissibleCirclesValidated) {
  auto cs = admissible_circles(2, 0.5, 0.1, 0.2, 4.0);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_DOUBLE_EQ(cs[1].radius, 0.8);
  EXPECT_THROW(admissible_circles(2, 2.0, 0.1, 0.2, 1.5), ValidationError);
  EXPECT_THROW(admissible_circles(2, 0.5, 0.3, 0.2, 2.0), ConfigurationError);
  EXPECT_THROW(admissible_circles(3, 0.5, 0.3, 0.4, 4.0), ConfigurationError);
}

TEST(Suite, FullRunPasses) {
  auto rs = vertex_suite();
  EXPECT_GE(rs.size(), 9u);
  for (auto& r : rs) EXPECT_TRUE(r.pass) << r.name;
}
