#include "support/lp.h"

#include <gtest/gtest.h>

namespace subjfair::testing {
namespace {

TEST(LpTest, TextbookMaximum) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
  LinearProgram lp;
  lp.c = {-3, -5};
  lp.a_ub = {{1, 0}, {0, 2}, {3, 2}};
  lp.b_ub = {4, 12, 18};
  const auto sol = SolveLp(lp);
  ASSERT_TRUE(sol.feasible);
  EXPECT_NEAR(sol.value, -36, 1e-9);
  EXPECT_NEAR(sol.x[0], 2, 1e-9);
  EXPECT_NEAR(sol.x[1], 6, 1e-9);
}

TEST(LpTest, EqualityAndNegativeRhs) {
  // min x + 2y s.t. x + y = 1, -x <= -0.25
  LinearProgram lp;
  lp.c = {1, 2};
  lp.a_eq = {{1, 1}};
  lp.b_eq = {1};
  lp.a_ub = {{-1, 0}};
  lp.b_ub = {-0.25};
  const auto sol = SolveLp(lp);
  ASSERT_TRUE(sol.feasible);
  EXPECT_NEAR(sol.value, 1.0, 1e-12);
}

TEST(LpTest, Infeasible) {
  LinearProgram lp;
  lp.c = {1};
  lp.a_ub = {{1}};
  lp.b_ub = {1};
  lp.a_eq = {{1}};
  lp.b_eq = {2};
  EXPECT_FALSE(SolveLp(lp).feasible);
}

TEST(LpTest, DegenerateVertex) {
  // Several constraints tight at the optimum.
  LinearProgram lp;
  lp.c = {-1, -1};
  lp.a_ub = {{1, 0}, {0, 1}, {1, 1}, {2, 1}};
  lp.b_ub = {1, 1, 2, 3};
  const auto sol = SolveLp(lp);
  ASSERT_TRUE(sol.feasible);
  EXPECT_NEAR(sol.value, -2, 1e-12);
}

}  // namespace
}  // namespace subjfair::testing
