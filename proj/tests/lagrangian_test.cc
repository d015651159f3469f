#include "subjfair/lagrangian.h"

#include <random>

#include <gtest/gtest.h>

#include "subjfair/error.h"
#include "support/brute.h"

namespace subjfair {
namespace {

using testing::BruteLagrangian;
using testing::Labelling;
using testing::RandomConstraints;
using testing::RandomDataset;

Dataset Labels(std::vector<std::uint8_t> y) {
  FeatureMatrix x(y.size(), 1);
  for (std::size_t i = 0; i < y.size(); ++i) x(i, 0) = i;
  return Dataset(x, std::move(y), {});
}

TEST(LagrangianTest, ZeroDualsGiveError) {
  const auto ds = Labels({0, 1, 1, 0});
  const ConstraintSet c(PairSet({{0, 1}}), {1}, 1);
  const FairProblem problem(ds, c);
  const PrimalVars p{RandomizedClassifier::Deterministic(
                         Hypothesis::Tabular({1, 1, 0, 0})),
                     {0.3, 0.7}};
  EXPECT_DOUBLE_EQ(LagrangianValue(p, {{0, 0}, 0}, problem, {0.1, 0}), 0.5);
  EXPECT_EQ(Penalty(p, {{0, 0}, 0}, problem, {0.1, 0}), 0.0);
}

TEST(LagrangianTest, SinglePairArithmetic) {
  const auto ds = Labels({0, 0});
  const ConstraintSet c(PairSet({{0, 1}}), {1}, 1);
  const FairProblem problem(ds, c);
  // rates 0.4 and 0: disparity(0,1) = 0.4
  const PrimalVars p{RandomizedClassifier({{Hypothesis::Tabular({1, 0}), 0.4},
                                           {Hypothesis::Tabular({0, 0}), 0.6}}),
                     {0, 0}};
  const double err = 0.4 * 0.5;
  EXPECT_NEAR(LagrangianValue(p, {{1, 0}, 0}, problem, {0.1, 0}), err + 0.3,
              1e-15);
}

TEST(LagrangianTest, ShapeMismatch) {
  const auto ds = Labels({0, 0});
  const ConstraintSet c(PairSet({{0, 1}}), {1}, 1);
  const FairProblem problem(ds, c);
  const PrimalVars p{RandomizedClassifier::Deterministic(
                         Hypothesis::Tabular({0, 0})),
                     {0}};
  EXPECT_THROW(LagrangianValue(p, {{0, 0}, 0}, problem, {0, 0}),
               InvalidArgument);
  const ConstraintSet far(PairSet({{0, 5}}), {1}, 1);
  EXPECT_THROW(FairProblem(ds, far), InvalidArgument);
}

TEST(LagrangianTest, MatchesBruteForceAndSeparates) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 5;
    const auto ds = RandomDataset(n, 1, rng);
    const auto c = RandomConstraints(n, 1 + trial % 3, 3, false, rng);
    const FairProblem problem(ds, c);
    std::vector<std::vector<std::uint8_t>> labs;
    std::vector<double> probs;
    std::vector<MixtureComponent> comps;
    double total = 0;
    for (int k = 0; k < 3; ++k) {
      labs.push_back(Labelling(rng() % (1u << n), n));
      probs.push_back(u(rng) + 0.01);
      total += probs.back();
    }
    for (int k = 0; k < 3; ++k) {
      probs[k] /= total;
      comps.push_back({Hypothesis::Tabular(labs[k]), probs[k]});
    }
    PrimalVars p{RandomizedClassifier(comps), {}};
    DualVars dv;
    for (int k = 0; k < problem.num_pairs(); ++k) {
      p.alpha.push_back(u(rng));
      dv.lambda.push_back(3 * u(rng));
    }
    dv.tau = 2 * u(rng);
    const FairnessParams params{0.5 * u(rng), 0.5 * u(rng)};
    const double value = LagrangianValue(p, dv, problem, params);
    EXPECT_NEAR(value,
                BruteLagrangian(labs, probs, ds, c, dv.lambda, p.alpha, dv.tau,
                                params),
                1e-12);
    const double split = EmpiricalErrorOf(PositiveRates(p.classifier, ds), ds) +
                         ClassifierPart(p.classifier, dv, problem) +
                         SlackPart(p.alpha, dv, problem, params);
    EXPECT_NEAR(value, split, 1e-12);
  }
}

TEST(BuildCostsTest, Examples) {
  const auto ds = Labels({0, 1, 0});
  const ConstraintSet c(PairSet({{0, 1}}), {1}, 1);
  const FairProblem problem(ds, c);
  const auto zero = BuildCosts(problem, std::vector<double>{0, 0});
  EXPECT_EQ(zero.costs0()[0], 0.0);
  EXPECT_DOUBLE_EQ(zero.costs1()[0], 1.0 / 3);
  EXPECT_DOUBLE_EQ(zero.costs0()[1], 1.0 / 3);
  EXPECT_EQ(zero.costs1()[1], 0.0);

  const auto ds1 = Labels({1, 0, 0});
  const FairProblem p1(ds1, c);
  // ordered pairs: (0,1) then (1,0)
  const auto inst = BuildCosts(p1, std::vector<double>{0.5, 0.2});
  EXPECT_DOUBLE_EQ(inst.costs1()[0], 0.3);
  EXPECT_DOUBLE_EQ(inst.costs0()[0], 1.0 / 3);
  EXPECT_DOUBLE_EQ(inst.costs1()[1], 1.0 / 3 - 0.3);
}

TEST(BestResponsePrimalTest, ZeroDualsGiveErmAndFullSlack) {
  const auto ds = Labels({0, 1, 1});
  const ConstraintSet c(PairSet({{0, 1}, {1, 2}}), {1, 0}, 1);
  const FairProblem problem(ds, c);
  const LabellingOracle oracle;
  const auto p = BestResponsePrimal({{0, 0, 0, 0}, 0}, problem, oracle);
  EXPECT_EQ(PredictAll(p.classifier.components()[0].hypothesis, ds),
            (std::vector<std::uint8_t>{0, 1, 1}));
  EXPECT_EQ(p.alpha, (std::vector<double>{1, 1, 1, 1}));
}

TEST(BestResponsePrimalTest, AlphaRule) {
  const auto ds = Labels({0, 1});
  const ConstraintSet c(PairSet({{0, 1}}), {1}, 1);
  const FairProblem problem(ds, c);
  // tau w / |A| = 0.02 * 1 / 2 = 0.01 against lambda 0.5 and 0
  const auto a = BestResponseAlpha(std::vector<double>{0.5, 0.0}, 0.02, problem);
  EXPECT_EQ(a, (std::vector<std::uint8_t>{1, 0}));
  const auto tie = BestResponseAlpha(std::vector<double>{0.01, 0.0}, 0.02, problem);
  EXPECT_EQ(tie[0], 1);
}

TEST(BestResponsePrimalTest, AttainsEnumeratedMinimum) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  const LabellingOracle oracle;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5;
    const auto ds = RandomDataset(n, 1, rng);
    const auto c = RandomConstraints(n, 2, 2, false, rng);
    const FairProblem problem(ds, c);
    const int na = problem.num_pairs();
    DualVars dv;
    for (int k = 0; k < na; ++k) dv.lambda.push_back(u(rng) * 5 / na);
    dv.tau = 5 * u(rng);
    const FairnessParams params{0.2, 0.1};
    const auto br = BestResponsePrimal(dv, problem, oracle);
    const double got = LagrangianValue(br, dv, problem, params);
    double best = 1e300;
    for (std::uint64_t h = 0; h < (1u << n); ++h) {
      for (std::uint64_t a = 0; a < (1u << na); ++a) {
        const auto alpha = Labelling(a, na);
        best = std::min(best,
                        BruteLagrangian({Labelling(h, n)}, {1.0}, ds, c,
                                        dv.lambda,
                                        std::vector<double>(alpha.begin(),
                                                            alpha.end()),
                                        dv.tau, params));
      }
    }
    EXPECT_LE(got, best + 1e-9);
  }
}

TEST(BestResponseDualTest, FeasiblePointGivesZero) {
  const auto ds = Labels({0, 1});
  const ConstraintSet c(PairSet({{0, 1}}), {1}, 1);
  const FairProblem problem(ds, c);
  const PrimalVars p{RandomizedClassifier::Deterministic(
                         Hypothesis::Tabular({0, 0})),
                     {0, 0}};
  const auto dv = BestResponseDual(p, problem, {0.1, 0.0}, {10, 10, 0.1});
  EXPECT_EQ(dv.lambda, (std::vector<double>{0, 0}));
  EXPECT_EQ(dv.tau, 0.0);
  EXPECT_EQ(Penalty(p, dv, problem, {0.1, 0.0}), 0.0);
}

TEST(BestResponseDualTest, SingleViolation) {
  const auto ds = Labels({0, 1, 0});
  const ConstraintSet c(PairSet({{0, 1}, {0, 2}}), {1, 1}, 1);
  const FairProblem problem(ds, c);
  // rates (0.5, 0, 0); margin on (0,1) = 0.5 - 0.25 - 0.1 = 0.15, on
  // (0,2) = 0.5 - 0.5 - 0.1 < 0; weighted slack (0.25 + 0.5) / 4 = eta
  const PrimalVars p{RandomizedClassifier({{Hypothesis::Tabular({1, 0, 0}), 0.5},
                                           {Hypothesis::Tabular({0, 0, 0}), 0.5}}),
                     {0.25, 0.0, 0.5, 0.0}};
  const FairnessParams params{0.1, 0.1875};
  const auto dv = BestResponseDual(p, problem, params, {7, 3, 0.1});
  EXPECT_EQ(dv.lambda, (std::vector<double>{7, 0, 0, 0}));
  EXPECT_EQ(dv.tau, 0.0);  // slack equals eta, not above it
  EXPECT_NEAR(Penalty(p, dv, problem, params), 7 * 0.15, 1e-12);
}

TEST(BestResponseDualTest, TieGoesToLowestPair) {
  const auto ds = Labels({0, 0, 0});
  const ConstraintSet c(PairSet({{1, 2}, {0, 1}}), {1, 1}, 1);
  const FairProblem problem(ds, c);
  const PrimalVars p{RandomizedClassifier::Deterministic(
                         Hypothesis::Tabular({1, 0, 1})),
                     {0, 0, 0, 0}};
  // (0,1) and (2,1) both have margin 1; (0,1) is canonical pair 0.
  const auto dv = BestResponseDual(p, problem, {0, 0}, {1, 1, 1});
  EXPECT_EQ(dv.lambda, (std::vector<double>{1, 0, 0, 0}));
}

TEST(BestResponseDualTest, AttainsVertexMaximum) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 5;
    const auto ds = RandomDataset(n, 1, rng);
    const auto c = RandomConstraints(n, 3, 4, false, rng);
    const FairProblem problem(ds, c);
    const int na = problem.num_pairs();
    const double q = u(rng);
    const RandomizedClassifier d(
        {{Hypothesis::Tabular(Labelling(rng() % 32, n)), q},
         {Hypothesis::Tabular(Labelling(rng() % 32, n)), 1 - q}});
    PrimalVars p{d, {}};
    for (int k = 0; k < na; ++k) p.alpha.push_back(u(rng) * 0.5);
    const FairnessParams params{0.2 * u(rng), 0.2 * u(rng)};
    const GuaranteeBudgets budgets{4, 3, 0.1};
    const auto dv = BestResponseDual(p, problem, params, budgets);
    const double got = LagrangianValue(p, dv, problem, params);
    double best = -1e300;
    for (int v = -1; v < na; ++v) {
      for (double tau : {0.0, budgets.c_tau}) {
        DualVars cand{std::vector<double>(na, 0.0), tau};
        if (v >= 0) cand.lambda[v] = budgets.c_lambda;
        best = std::max(best, LagrangianValue(p, cand, problem, params));
      }
    }
    EXPECT_GE(got, best - 1e-9);
    EXPECT_GE(Penalty(p, dv, problem, params), 0.0);
  }
}

TEST(ParamsTest, Validation) {
  EXPECT_THROW((FairnessParams{1.5, 0}.Validate()), InvalidArgument);
  EXPECT_THROW((FairnessParams{0, -0.1}.Validate()), InvalidArgument);
  EXPECT_THROW((GuaranteeBudgets{0, 1, 1}.Validate()), InvalidArgument);
  EXPECT_NO_THROW((GuaranteeBudgets{1, 1, 1}.Validate()));
}

}  // namespace
}  // namespace subjfair
