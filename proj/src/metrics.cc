#include "subjfair/metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "subjfair/error.h"
#include "subjfair/kernels.h"

namespace subjfair {

double EmpiricalError(const RandomizedClassifier& d, const Dataset& dataset) {
  double total = 0;
  for (const auto& c : d.components()) {
    const auto pred = PredictAll(c.hypothesis, dataset);
    int wrong = 0;
    for (int i = 0; i < dataset.size(); ++i) {
      wrong += pred[i] != dataset.label(i);
    }
    total += c.weight * wrong / dataset.size();
  }
  return total;
}

double FairnessLoss(double weight, double gamma, double disparity) {
  return weight * std::max(0.0, std::abs(disparity) - gamma);
}

double FairnessLossPair(const RandomizedClassifier& d, double weight,
                        double gamma, std::span<const double> x,
                        std::span<const double> x_prime) {
  return FairnessLoss(weight, gamma, PairDisparity(d, x, x_prime));
}

FairnessLossReport FairnessLossSet(const RandomizedClassifier& d,
                                   const Dataset& dataset,
                                   std::span<const OrderedPair> pairs,
                                   std::span<const double> weights,
                                   double gamma) {
  if (pairs.empty()) throw InvalidArgument("fairness loss over an empty pair set");
  if (weights.size() != pairs.size()) {
    throw InvalidArgument("one weight per pair required");
  }
  for (const auto& p : pairs) {
    if (p.i < 0 || p.j < 0 || p.i >= dataset.size() || p.j >= dataset.size()) {
      throw InvalidArgument("pair index out of range");
    }
  }
  const auto rates = PositiveRates(d, dataset);
  std::vector<double> losses(pairs.size());
  kernels::FairnessLosses(rates, pairs, weights, gamma, losses);
  FairnessLossReport report;
  report.gamma = gamma;
  report.pair_count = static_cast<int>(pairs.size());
  report.per_pair.reserve(pairs.size());
  double total = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    report.per_pair.push_back({pairs[k].i, pairs[k].j, losses[k]});
    total += losses[k];
  }
  report.mean = total / pairs.size();
  return report;
}

FairnessLossReport FairnessLossSet(const RandomizedClassifier& d,
                                   const Dataset& dataset,
                                   const ConstraintSet& constraints,
                                   double gamma,
                                   std::span<const OrderedPair> pairs) {
  std::vector<double> weights(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    weights[k] = constraints.Weight(pairs[k].i, pairs[k].j);
  }
  return FairnessLossSet(d, dataset, pairs, weights, gamma);
}

FairnessLossReport FairnessLossSet(const RandomizedClassifier& d,
                                   const Dataset& dataset,
                                   const ConstraintSet& constraints,
                                   double gamma) {
  const auto& canonical = constraints.pair_set().canonical();
  std::vector<OrderedPair> pairs;
  std::vector<double> weights;
  for (std::size_t k = 0; k < canonical.size(); ++k) {
    pairs.push_back({canonical[k].lo, canonical[k].hi});
    weights.push_back(constraints.weight(static_cast<int>(k)));
  }
  return FairnessLossSet(d, dataset, pairs, weights, gamma);
}

double ErrorBound(int vc_dim, std::int64_t n, double delta) {
  if (vc_dim < 1) throw InvalidArgument("vc_dim must be >= 1");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
  return std::sqrt((vc_dim + std::log(1.0 / delta)) / static_cast<double>(n));
}

void BoundInputs::Validate() const {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (vc_dim < 1) throw InvalidArgument("vc_dim must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
}

FairnessBound FairnessGeneralizationBound(const BoundInputs& in) {
  in.Validate();
  const double n = static_cast<double>(in.n);
  const double m = static_cast<double>(in.m);
  const double d = in.vc_dim;
  const double eps2 = in.epsilon * in.epsilon;

  FairnessBound b;
  b.k = std::log(2.0 * n * n) / (8.0 * eps2) + 1.0;
  b.k_prime = 2.0 * std::log(2.0 * m) / eps2 + 1.0;
  b.k_sparsify = 2.0 * std::log(2.0 * n * n) / eps2 + 1.0;

  const double log_base = std::log(2.0 * std::numbers::e * n / d);
  const double a = std::log(8.0) + d * b.k * log_base - n * eps2 / 32.0;
  const double c = d * b.k_prime * log_base - 8.0 * m * eps2;
  const double hi = std::max(a, c);
  b.log_value = hi + std::log(std::exp(a - hi) + std::exp(c - hi));
  b.value = std::exp(b.log_value);
  b.vacuous = b.log_value >= 0.0;
  return b;
}

}  // namespace subjfair
