#include "subjfair/metrics.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "subjfair/error.h"
#include "subjfair/solver.h"
#include "support/brute.h"

namespace subjfair {
namespace {

using testing::Labelling;
using testing::RandomConstraints;
using testing::RandomDataset;

Dataset Labels(std::vector<std::uint8_t> y) {
  FeatureMatrix x(y.size(), 1);
  for (std::size_t i = 0; i < y.size(); ++i) x(i, 0) = i;
  return Dataset(x, std::move(y), {});
}

TEST(EmpiricalErrorTest, Examples) {
  const auto ds = Labels({0, 1, 1, 0});
  EXPECT_EQ(EmpiricalError(RandomizedClassifier::Deterministic(
                               Hypothesis::Tabular({0, 1, 1, 0})),
                           ds),
            0.0);
  std::vector<std::uint8_t> y(50, 0);
  for (int i = 0; i < 23; ++i) y[i] = 1;  // mean 0.46
  const auto base = Labels(y);
  EXPECT_NEAR(EmpiricalError(RandomizedClassifier::Deterministic(
                                 Hypothesis::Tabular(std::vector<std::uint8_t>(50, 1))),
                             base),
              0.54, 1e-15);
}

TEST(EmpiricalErrorTest, MatchesDoubleSum) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = RandomDataset(10, 1, rng);
    std::vector<MixtureComponent> comps;
    std::vector<std::vector<std::uint8_t>> labs;
    double total = 0;
    for (int k = 0; k < 4; ++k) {
      labs.push_back(Labelling(rng() % 1024, 10));
      comps.push_back({Hypothesis::Tabular(labs.back()), u(rng) + 0.1});
      total += comps.back().weight;
    }
    double expected = 0;
    for (int k = 0; k < 4; ++k) {
      comps[k].weight /= total;
      for (int i = 0; i < 10; ++i) {
        expected += comps[k].weight * (labs[k][i] != ds.label(i)) / 10.0;
      }
    }
    EXPECT_NEAR(EmpiricalError(RandomizedClassifier(comps), ds), expected,
                1e-14);
  }
}

TEST(FairnessLossTest, PairExamples) {
  EXPECT_NEAR(FairnessLoss(0.5, 0.3, 0.8), 0.25, 1e-15);
  EXPECT_NEAR(FairnessLoss(0.5, 0.3, -0.8), 0.25, 1e-15);
  EXPECT_EQ(FairnessLoss(1.0, 1.0, 1.0), 0.0);
  const RandomizedClassifier d(
      {{Hypothesis::Linear({1.0}, -0.5), 0.8}, {Hypothesis::Linear({0.0}, -1), 0.2}});
  const std::vector<double> a{1.0}, b{0.0};
  // rates 0.8 and 0
  EXPECT_NEAR(FairnessLossPair(d, 0.5, 0.3, a, b), 0.25, 1e-15);
  EXPECT_EQ(FairnessLossPair(d, 0.5, 0.3, a, b),
            FairnessLossPair(d, 0.5, 0.3, b, a));
  EXPECT_EQ(FairnessLossPair(d, 0.5, 1.0, a, b), 0.0);
}

TEST(FairnessLossTest, MonotoneInGammaAndLipschitz) {
  for (double disp = -1; disp <= 1; disp += 0.05) {
    for (double g = 0; g < 1; g += 0.05) {
      EXPECT_GE(FairnessLoss(0.7, g, disp), FairnessLoss(0.7, g + 0.05, disp));
      EXPECT_LE(std::abs(FairnessLoss(1, g, disp) - FairnessLoss(1, g, disp + 0.01)),
                0.01 + 1e-12);
    }
  }
}

TEST(FairnessLossSetTest, Averaging) {
  const auto ds = Labels({0, 0, 0, 0});
  const auto d = RandomizedClassifier::Deterministic(
      Hypothesis::Tabular({1, 0, 1, 1}));
  const std::vector<OrderedPair> pairs{{0, 1}, {2, 3}, {2, 1}};
  // disparities 1, 0, 1 with weights 0.3, 1, 0.5 and gamma 0.1
  const auto r = FairnessLossSet(d, ds, pairs, std::vector<double>{0.3, 1, 0.5},
                                 0.1);
  ASSERT_EQ(r.pair_count, 3);
  EXPECT_NEAR(r.per_pair[0].loss, 0.27, 1e-15);
  EXPECT_EQ(r.per_pair[1].loss, 0.0);
  EXPECT_NEAR(r.mean, (0.27 + 0.45) / 3, 1e-15);
  EXPECT_THROW(FairnessLossSet(d, ds, std::span<const OrderedPair>{},
                               std::span<const double>{}, 0.1),
               InvalidArgument);
}

TEST(FairnessLossSetTest, TwoPairs) {
  const auto ds = Labels({0, 0, 0});
  const RandomizedClassifier d({{Hypothesis::Tabular({1, 0, 1}), 0.6},
                                {Hypothesis::Tabular({0, 0, 1}), 0.4}});
  // rates (0.6, 0, 1): loss(0,1) = 0.6 - 0.4 = 0.2, loss(1,2) = 1 - 0.4 = 0.6
  const std::vector<OrderedPair> pairs{{0, 1}, {1, 2}};
  const auto r = FairnessLossSet(d, ds, pairs, std::vector<double>{1, 0.5}, 0.4);
  EXPECT_NEAR(r.mean, 0.25, 1e-15);
}

TEST(FairnessLossSetTest, ZeroWeightsAndLookup) {
  const auto ds = Labels({0, 0, 0});
  const auto d = RandomizedClassifier::Deterministic(
      Hypothesis::Tabular({1, 0, 1}));
  const ConstraintSet zero(PairSet({{0, 1}, {1, 2}}), {0, 0}, 3);
  EXPECT_EQ(FairnessLossSet(d, ds, zero, 0.0).mean, 0.0);
  const ConstraintSet some(PairSet({{0, 1}, {1, 2}}), {3, 0}, 3);
  const auto r = FairnessLossSet(d, ds, some, 0.0);
  EXPECT_EQ(r.pair_count, 2);
  EXPECT_NEAR(r.mean, 0.5, 1e-15);
  const std::vector<OrderedPair> other{{2, 0}, {1, 0}};
  const auto looked = FairnessLossSet(d, ds, some, 0.0, other);
  EXPECT_EQ(looked.per_pair[0].loss, 0.0);  // weight 0 outside the set
  EXPECT_EQ(looked.per_pair[1].loss, 1.0);
}

TEST(FairnessLossSetTest, SolverOutputWithinSlackBudget) {
  std::mt19937_64 rng(4);
  const auto ds = RandomDataset(6, 1, rng);
  const auto c = RandomConstraints(6, 3, 2, true, rng);
  const FairProblem problem(ds, c);
  SolverConfig config;
  config.params = {0.0, 0.2};
  config.budgets = {5, 5, 0.1};
  const LabellingOracle oracle;
  const auto report = Solve(problem, config, oracle);
  // With gamma = 0 the one-sided loss w max(0, disparity) of each ordered
  // pair is at most w (alpha + max_violation); the absolute-value loss of
  // an unordered pair is the sum of its two one-sided losses.
  const auto disp = PairDisparities(report.classifier, problem);
  double one_sided = 0;
  for (int k = 0; k < problem.num_pairs(); ++k) {
    one_sided += problem.weights()[k] * std::max(0.0, disp[k]);
  }
  one_sided /= problem.num_pairs();
  const double slack = std::max(0.0, report.max_violation);
  EXPECT_LE(one_sided, report.weighted_slack + slack + 1e-12);
  const auto loss = FairnessLossSet(report.classifier, ds, c, 0.0,
                                    problem.pairs());
  EXPECT_NEAR(loss.mean, 2 * one_sided, 1e-12);
}

TEST(FairnessLossSetTest, LargerDualBudgetTightensViolation) {
  std::mt19937_64 rng(5);
  const auto ds = RandomDataset(40, 2, rng);
  const auto c = RandomConstraints(40, 30, 1, true, rng);
  const FairProblem problem(ds, c);
  const HeuristicOracle oracle(ds);
  SolverConfig config;
  config.params = {0.1, 0.0};
  config.budgets = {1, 10, 0.5};
  config.t_override = 3000;
  const auto loose = Solve(problem, config, oracle);
  config.budgets.c_lambda = 20;
  const auto tight = Solve(problem, config, oracle);
  EXPECT_LE(tight.max_violation, loose.max_violation);
}

TEST(ErrorBoundTest, Examples) {
  EXPECT_NEAR(ErrorBound(3, 300, std::exp(-1.0)), std::sqrt(4.0 / 300), 1e-15);
  EXPECT_NEAR(ErrorBound(3, 300, std::exp(-1.0)), 0.1155, 5e-5);
  EXPECT_NEAR(ErrorBound(3, 1200, 0.1) * 2, ErrorBound(3, 300, 0.1), 1e-15);
  EXPECT_NEAR(ErrorBound(3, 300, 1.0 - 1e-12), std::sqrt(3.0 / 300), 1e-9);
}

TEST(FairnessBoundTest, Formulas) {
  const auto b = FairnessGeneralizationBound({1000, 100, 5, 0.5, 0.05});
  EXPECT_NEAR(b.k_prime, 2 * std::log(200.0) / 0.25 + 1, 1e-12);
  EXPECT_NEAR(b.k_prime, 43.39, 5e-3);
  EXPECT_NEAR(b.k, std::log(2e6) / 2 + 1, 1e-12);
}

TEST(FairnessBoundTest, SmallSampleIsVacuous) {
  const auto b = FairnessGeneralizationBound({200, 200, 3, 0.1, 0.05});
  EXPECT_TRUE(b.vacuous);
  EXPECT_GT(b.log_value, 0.0);
  const auto tiny = FairnessGeneralizationBound({1000, 1000, 5, 0.1, 0.05});
  EXPECT_TRUE(std::isinf(tiny.value) || tiny.value > 1);
  EXPECT_TRUE(std::isfinite(tiny.log_value));
}

TEST(FairnessBoundTest, MonotoneBeyondCrossover) {
  double prev = INFINITY;
  // The second term grows with n at fixed m, so n and m move together.
  for (double n = 1e9; n <= 1e12; n *= 2) {
    const auto b = FairnessGeneralizationBound(
        {static_cast<std::int64_t>(n), static_cast<std::int64_t>(n), 5, 0.1,
         0.05});
    EXPECT_LT(b.log_value, prev);
    prev = b.log_value;
  }
  prev = INFINITY;
  for (double m = 1e8; m <= 1e11; m *= 2) {
    const auto b = FairnessGeneralizationBound(
        {1000000000, static_cast<std::int64_t>(m), 5, 0.1, 0.05});
    EXPECT_LE(b.log_value, prev);
    prev = b.log_value;
  }
  const auto big = FairnessGeneralizationBound(
      {1000000000000, 100000000000, 5, 0.1, 0.05});
  EXPECT_FALSE(big.vacuous);
}

TEST(BoundInputsTest, Validation) {
  EXPECT_THROW(FairnessGeneralizationBound({0, 1, 1, 0.1, 0.1}),
               InvalidArgument);
  EXPECT_THROW(FairnessGeneralizationBound({10, 1, 1, 0.1, 1.0}),
               InvalidArgument);
  EXPECT_THROW(FairnessGeneralizationBound({10, 1, 1, 0.0, 0.1}),
               InvalidArgument);
}

}  // namespace
}  // namespace subjfair
