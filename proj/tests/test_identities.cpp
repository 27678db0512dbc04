#include <gtest/gtest.h>

#include <vector>

#include <masep/identities.hpp>

using namespace masep;

namespace {

void expect_pass(const IdentityReport& r) {
  EXPECT_TRUE(r.pass) << r.name << ": max error " << r.max_error << " vs " << r.threshold << " " << r.detail;
}

}  // namespace

TEST(Eigenfunction, FreeEvolution) {
  expect_pass(check_free_evolution({0, 2}, {1}, 0.7));
  expect_pass(check_free_evolution({-1, 1, 4}, {2, 3}, 0.4));
}

TEST(Eigenfunction, FreeEvolutionConvergesAtSecondOrder) {
  std::vector<cplx> z{cplx(0.4, 0.2), cplx(-0.3, 0.5)}, u{cplx(0.1, -0.6)};
  auto e = free_evolution_errors({0, 3}, {2}, 0.5, z, u, 1e-2);
  EXPECT_GT(e.ratio(), 3.0);
  EXPECT_LT(e.ratio(), 5.0);
  EXPECT_LT(e.error_extrapolated, e.error_half);
}

TEST(Eigenfunction, BoundaryConditions) {
  expect_pass(check_boundary_conditions({1, 1}, {1}, 1, BoundaryCase::exclusion));
  expect_pass(check_boundary_conditions({1, 1}, {2}, 1, BoundaryCase::overtaking));
  expect_pass(check_boundary_conditions({0, 2, 2}, {1, 3}, 2, BoundaryCase::overtaking));
  expect_pass(check_boundary_conditions({1, 1, 3}, {3}, 1, BoundaryCase::same_type));
}

TEST(Integrand, UFactorization) {
  expect_pass(check_u_factorization(3, 2));
  expect_pass(check_u_factorization(4, 1));
}

TEST(Integrand, RemovablePoles) { expect_pass(check_removable_poles(3, 2, 0.02, 10)); }

TEST(Sums, NestedGeometric) {
  expect_pass(check_nested_geometric(2, 1));
  expect_pass(check_nested_geometric(3, -2));
  expect_pass(check_nested_geometric(2, 0, 0.3));
}

TEST(Sums, DivergentSeriesRejected) {
  std::vector<cplx> z{1.2, 0.9};
  EXPECT_THROW(nested_geometric(z, 0, 50), ValidationError);
}

TEST(Sums, TailBoundCoversTruncation) {
  std::vector<cplx> z{cplx(0.3, 0.4), cplx(-0.5, 0.1)};
  auto c = nested_geometric(z, 1, 10);
  EXPECT_TRUE(c.pass());
  EXPECT_GT(c.tail_bound, 0.0);
}

TEST(Symmetrization, AllForms) {
  expect_pass(check_symmetrization(2));
  expect_pass(check_symmetrization(3, SymmetrizationForm::crossing));
  expect_pass(check_symmetrization(2, SymmetrizationForm::bernoulli, 0.3));
}

TEST(InitialCondition, GreenFunctionIsDeltaAtZero) {
  expect_pass(check_initial_condition(ParticleConfig::two_species({0, 1}, {1})));
}

TEST(NegativeControls, EveryControlFails) {
  auto cs = identity_negative_controls();
  ASSERT_FALSE(cs.empty());
  for (auto& c : cs) EXPECT_FALSE(c.pass) << c.name;
}

TEST(Suite, FullRunPasses) {
  for (auto& r : identity_suite()) expect_pass(r);
}
