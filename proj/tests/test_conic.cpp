#include "precoder/conic.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace precoder::conic;
using precoder::testing::contradictory_halflines;
using precoder::testing::least_norm;
using precoder::testing::norm_of_constant;
using precoder::testing::random_least_norm;

ConeProgram two_var_three_rows() {
  ConeProgram p;
  p.num_vars = 2;
  p.objective = Eigen::Vector2d(1.0, 1.0);
  p.constraint_matrix = Eigen::MatrixXd::Identity(3, 2);
  p.offset = Eigen::Vector3d(1.0, 1.0, 1.0);
  p.cones = {Cone::nonnegative(1), Cone::second_order(2)};
  return p;
}

TEST(Validate, AcceptsConsistentProgram) {
  EXPECT_FALSE(validate(two_var_three_rows()).has_value());
}

TEST(Validate, RejectsConeDimensionMismatch) {
  ConeProgram p = two_var_three_rows();
  p.cones.push_back(Cone::nonnegative(1));
  const auto msg = validate(p);
  ASSERT_TRUE(msg.has_value());
  EXPECT_NE(msg->find("cone"), std::string::npos);
  EXPECT_THROW(solve(p), ConicError);
}

TEST(Validate, RejectsNonFiniteOffset) {
  ConeProgram p = two_var_three_rows();
  p.offset(1) = std::nan("");
  EXPECT_TRUE(validate(p).has_value());
  p.offset(1) = INFINITY;
  EXPECT_TRUE(validate(p).has_value());
}

TEST(Validate, RejectsObjectiveLengthMismatch) {
  ConeProgram p = two_var_three_rows();
  p.objective = Eigen::Vector3d(1.0, 1.0, 1.0);
  EXPECT_TRUE(validate(p).has_value());
}

TEST(Solve, NormOfConstantVector) {
  const Solution s = solve(norm_of_constant());
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.objective_value, 5.0, 1e-7);
  EXPECT_NEAR(s.x(0), 5.0, 1e-7);
}

TEST(Solve, LeastNormOnHyperplane) {
  const Eigen::RowVector3d a(1.0, 2.0, 2.0);
  const Solution s = solve(least_norm(a, Eigen::VectorXd::Ones(1)));
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.objective_value, 1.0 / 3.0, 1e-7);
  EXPECT_NEAR(s.x(0), 1.0 / 9.0, 1e-6);
  EXPECT_NEAR(s.x(1), 2.0 / 9.0, 1e-6);
  EXPECT_NEAR(s.x(2), 2.0 / 9.0, 1e-6);
}

TEST(Solve, EmptyConesAreSkipped) {
  ConeProgram p = norm_of_constant();
  p.cones = {Cone::zero(0), Cone::second_order(0), Cone::second_order(3), Cone::nonnegative(0)};
  ASSERT_FALSE(validate(p).has_value());
  const Solution s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.objective_value, 5.0, 1e-7);
  EXPECT_LE(residuals(p, s.x).cone_violation, 1e-8);
}

TEST(Solve, ContradictoryHalflinesArePrimalInfeasible) {
  EXPECT_EQ(solve(contradictory_halflines()).status, SolveStatus::PrimalInfeasible);
}

TEST(Solve, UnboundedBelowIsDualInfeasible) {
  // minimize -x subject to x >= 0
  ConeProgram p;
  p.num_vars = 1;
  p.objective = -Eigen::VectorXd::Ones(1);
  p.constraint_matrix = -Eigen::MatrixXd::Ones(1, 1);
  p.offset = Eigen::VectorXd::Zero(1);
  p.cones = {Cone::nonnegative(1)};
  EXPECT_EQ(solve(p).status, SolveStatus::DualInfeasible);
}

TEST(Solve, RandomLeastNormMatchesClosedForm) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto c = random_least_norm(rng);
    const ConeProgram p = least_norm(c.a, c.b);
    const Solution s = solve(p);
    ASSERT_EQ(s.status, SolveStatus::Optimal) << "instance " << i;
    EXPECT_NEAR(s.objective_value, c.optimum, 1e-6) << "instance " << i;
    EXPECT_LT(s.iterations, 50);
    // audited independently of the solver's own residual report
    EXPECT_LE(residuals(p, s.x).cone_violation, 1e-8);
  }
}

TEST(Solve, ObjectiveScalingScalesValueKeepsArgmin) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5; ++i) {
    const auto c = random_least_norm(rng);
    ConeProgram p = least_norm(c.a, c.b);
    const Solution base = solve(p);
    for (double lambda : {0.1, 3.0, 250.0}) {
      ConeProgram q = p;
      q.objective *= lambda;
      const Solution scaled = solve(q);
      ASSERT_EQ(scaled.status, SolveStatus::Optimal);
      EXPECT_NEAR(scaled.objective_value, lambda * base.objective_value,
                  10 * 1e-8 * std::max(1.0, std::abs(lambda * base.objective_value)));
      EXPECT_LE((scaled.x - base.x).lpNorm<Eigen::Infinity>(), 1e-6);
    }
  }
}

TEST(Solve, IterationLimitIsAStatus) {
  SolverSettings settings;
  settings.max_iter = 1;
  EXPECT_EQ(solve(norm_of_constant(), settings).status, SolveStatus::MaxIterations);
}

TEST(Residuals, InteriorPointHasNoViolation) {
  const ResidualReport r = residuals(norm_of_constant(), Eigen::VectorXd::Constant(1, 6.0));
  EXPECT_EQ(r.cone_violation, 0.0);
}

TEST(Residuals, ShortfallAlongFirstCoordinate) {
  // slack (4, 3, 4) needs a shift of 1 along the cone axis
  const ResidualReport r = residuals(norm_of_constant(), Eigen::VectorXd::Constant(1, 4.0));
  EXPECT_NEAR(r.cone_violation, 1.0, 1e-12);
  EXPECT_EQ(r.worst_row, 0u);
}

TEST(Residuals, WrongLengthThrows) {
  EXPECT_THROW(residuals(norm_of_constant(), Eigen::VectorXd::Ones(2)), ConicError);
}

TEST(Residuals, WorstRowNamesTheWorstBlock) {
  ConeProgram p = two_var_three_rows();
  // slack = (1, -3, 1); the SOC block (-3, 1) needs a shift of 4
  const ResidualReport r = residuals(p, Eigen::Vector2d(0.0, 4.0));
  EXPECT_NEAR(r.cone_violation, 4.0, 1e-12);
  EXPECT_EQ(r.worst_row, 1u);
}

TEST(BlockViolation, ZeroConeUsesLargestEntry) {
  EXPECT_DOUBLE_EQ(block_violation(ConeKind::Zero, Eigen::Vector2d(0.5, -2.0)), 2.0);
  EXPECT_DOUBLE_EQ(block_violation(ConeKind::Nonnegative, Eigen::Vector2d(0.5, -2.0)), 2.0);
  EXPECT_DOUBLE_EQ(block_violation(ConeKind::Nonnegative, Eigen::Vector2d(0.5, 2.0)), 0.0);
}

}  // namespace
