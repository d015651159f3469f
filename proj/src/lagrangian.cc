#include "subjfair/lagrangian.h"

#include <cmath>
#include <string>

#include "subjfair/error.h"
#include "subjfair/kernels.h"

namespace subjfair {
namespace {

void CheckUnit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in [0, 1], got " +
                          std::to_string(v));
  }
}

void CheckPositive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(name) + " must be positive, got " +
                          std::to_string(v));
  }
}

void CheckLength(std::size_t got, const FairProblem& problem,
                 const char* what) {
  if (got != static_cast<std::size_t>(problem.num_pairs())) {
    throw InvalidArgument(std::string(what) + " has " + std::to_string(got) +
                          " entries, expected |A| = " +
                          std::to_string(problem.num_pairs()));
  }
}

}  // namespace

void FairnessParams::Validate() const {
  CheckUnit(gamma, "gamma");
  CheckUnit(eta, "eta");
}

void GuaranteeBudgets::Validate() const {
  CheckPositive(c_lambda, "c_lambda");
  CheckPositive(c_tau, "c_tau");
  CheckPositive(nu, "nu");
}

FairProblem::FairProblem(const Dataset& dataset,
                         const ConstraintSet& constraints)
    : dataset_(&dataset),
      constraints_(&constraints),
      weights_(constraints.OrderedWeights()) {
  if (constraints.pair_set().MaxIndex() >= dataset.size()) {
    throw InvalidArgument("constraint pair index " +
                          std::to_string(constraints.pair_set().MaxIndex()) +
                          " out of range for n = " +
                          std::to_string(dataset.size()));
  }
}

double EmpiricalErrorOf(std::span<const double> rates, const Dataset& dataset) {
  double total = 0;
  for (int i = 0; i < dataset.size(); ++i) {
    total += dataset.label(i) ? 1.0 - rates[i] : rates[i];
  }
  return total / dataset.size();
}

std::vector<double> PairDisparities(const RandomizedClassifier& d,
                                    const FairProblem& problem) {
  const auto rates = PositiveRates(d, problem.dataset());
  std::vector<double> out(problem.num_pairs());
  kernels::PairDisparities(rates, problem.pairs(), out);
  return out;
}

double WeightedSlack(std::span<const double> alpha,
                     const FairProblem& problem) {
  CheckLength(alpha.size(), problem, "alpha");
  if (problem.num_pairs() == 0) return 0.0;
  double total = 0;
  for (int k = 0; k < problem.num_pairs(); ++k) {
    total += problem.weights()[k] * alpha[k];
  }
  return total / problem.num_pairs();
}

double ClassifierPart(const RandomizedClassifier& d, const DualVars& dv,
                      const FairProblem& problem) {
  CheckLength(dv.lambda.size(), problem, "lambda");
  const auto disp = PairDisparities(d, problem);
  double total = 0;
  for (int k = 0; k < problem.num_pairs(); ++k) total += dv.lambda[k] * disp[k];
  return total;
}

double SlackPart(std::span<const double> alpha, const DualVars& dv,
                 const FairProblem& problem, const FairnessParams& params) {
  CheckLength(dv.lambda.size(), problem, "lambda");
  CheckLength(alpha.size(), problem, "alpha");
  double total = 0;
  for (int k = 0; k < problem.num_pairs(); ++k) {
    total -= dv.lambda[k] * (alpha[k] + params.gamma);
  }
  return total + dv.tau * (WeightedSlack(alpha, problem) - params.eta);
}

double LagrangianValue(const PrimalVars& p, const DualVars& dv,
                       const FairProblem& problem,
                       const FairnessParams& params) {
  CheckLength(dv.lambda.size(), problem, "lambda");
  CheckLength(p.alpha.size(), problem, "alpha");
  const auto rates = PositiveRates(p.classifier, problem.dataset());
  double value = EmpiricalErrorOf(rates, problem.dataset());
  for (int k = 0; k < problem.num_pairs(); ++k) {
    const auto [i, j] = problem.pairs()[k];
    value += dv.lambda[k] *
             (rates[i] - rates[j] - p.alpha[k] - params.gamma);
  }
  return value + dv.tau * (WeightedSlack(p.alpha, problem) - params.eta);
}

double Penalty(const PrimalVars& p, const DualVars& dv,
               const FairProblem& problem, const FairnessParams& params) {
  CheckLength(dv.lambda.size(), problem, "lambda");
  CheckLength(p.alpha.size(), problem, "alpha");
  const auto disp = PairDisparities(p.classifier, problem);
  double value = 0;
  for (int k = 0; k < problem.num_pairs(); ++k) {
    value += dv.lambda[k] * (disp[k] - p.alpha[k] - params.gamma);
  }
  return value + dv.tau * (WeightedSlack(p.alpha, problem) - params.eta);
}

CscInstance BuildCosts(const FairProblem& problem,
                       std::span<const double> lambda) {
  CheckLength(lambda.size(), problem, "lambda");
  const int n = problem.n();
  std::vector<double> net(n, 0.0);
  for (int k = 0; k < problem.num_pairs(); ++k) {
    const auto [i, j] = problem.pairs()[k];
    net[i] += lambda[k];
    net[j] -= lambda[k];
  }
  std::vector<double> c0(n), c1(n);
  const double unit = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    if (problem.dataset().label(i) == 0) {
      c0[i] = 0.0;
      c1[i] = unit + net[i];
    } else {
      c0[i] = unit;
      c1[i] = net[i];
    }
  }
  return CscInstance(problem.dataset(), std::move(c0), std::move(c1));
}

std::vector<std::uint8_t> BestResponseAlpha(std::span<const double> lambda,
                                            double tau,
                                            const FairProblem& problem) {
  CheckLength(lambda.size(), problem, "lambda");
  std::vector<std::uint8_t> alpha(problem.num_pairs());
  const double scale = problem.num_pairs() ? 1.0 / problem.num_pairs() : 0.0;
  for (int k = 0; k < problem.num_pairs(); ++k) {
    alpha[k] = tau * problem.weights()[k] * scale - lambda[k] <= 0.0 ? 1 : 0;
  }
  return alpha;
}

PrimalVars BestResponsePrimal(const DualVars& dv, const FairProblem& problem,
                              const CscOracle& oracle) {
  auto h = oracle.Solve(BuildCosts(problem, dv.lambda));
  const auto bits = BestResponseAlpha(dv.lambda, dv.tau, problem);
  return PrimalVars{RandomizedClassifier::Deterministic(std::move(h)),
                    std::vector<double>(bits.begin(), bits.end())};
}

DualVars BestResponseDual(std::span<const double> disparities,
                          std::span<const double> alpha,
                          const FairProblem& problem,
                          const FairnessParams& params,
                          const GuaranteeBudgets& budgets) {
  CheckLength(disparities.size(), problem, "disparities");
  CheckLength(alpha.size(), problem, "alpha");
  DualVars dv;
  dv.lambda.assign(problem.num_pairs(), 0.0);
  int best = -1;
  double best_margin = 0.0;
  for (int k = 0; k < problem.num_pairs(); ++k) {
    const double margin = disparities[k] - alpha[k] - params.gamma;
    if (margin > best_margin) {
      best = k;
      best_margin = margin;
    }
  }
  if (best >= 0) dv.lambda[best] = budgets.c_lambda;
  dv.tau = WeightedSlack(alpha, problem) - params.eta > 0.0 ? budgets.c_tau
                                                            : 0.0;
  return dv;
}

DualVars BestResponseDual(const PrimalVars& p, const FairProblem& problem,
                          const FairnessParams& params,
                          const GuaranteeBudgets& budgets) {
  return BestResponseDual(PairDisparities(p.classifier, problem), p.alpha,
                          problem, params, budgets);
}

}  // namespace subjfair
