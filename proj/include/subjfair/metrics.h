#ifndef SUBJFAIR_METRICS_H_
#define SUBJFAIR_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "subjfair/dataset.h"
#include "subjfair/hypothesis.h"
#include "subjfair/judgments.h"
#include "subjfair/pairs.h"

namespace subjfair {

// E_{h~D}[(1/n) sum_i 1[h(x_i) != y_i]].
double EmpiricalError(const RandomizedClassifier& d, const Dataset& dataset);

// w max(0, |disparity| - gamma).
double FairnessLoss(double weight, double gamma, double disparity);

double FairnessLossPair(const RandomizedClassifier& d, double weight,
                        double gamma, std::span<const double> x,
                        std::span<const double> x_prime);

struct PairLoss {
  int i = 0;
  int j = 0;
  double loss = 0.0;
};

struct FairnessLossReport {
  std::vector<PairLoss> per_pair;
  double mean = 0.0;
  double gamma = 0.0;
  int pair_count = 0;
};

// Mean loss over the pair collection M with one weight per pair.
FairnessLossReport FairnessLossSet(const RandomizedClassifier& d,
                                   const Dataset& dataset,
                                   std::span<const OrderedPair> pairs,
                                   std::span<const double> weights,
                                   double gamma);

// Weights looked up in `constraints` (0 for pairs it does not contain).
FairnessLossReport FairnessLossSet(const RandomizedClassifier& d,
                                   const Dataset& dataset,
                                   const ConstraintSet& constraints,
                                   double gamma,
                                   std::span<const OrderedPair> pairs);

// M = the constraint set's own pairs, one entry per unordered pair.
FairnessLossReport FairnessLossSet(const RandomizedClassifier& d,
                                   const Dataset& dataset,
                                   const ConstraintSet& constraints,
                                   double gamma);

// sqrt((vc_dim + ln(1/delta)) / n), with the bound's unstated constant
// set to 1.
double ErrorBound(int vc_dim, std::int64_t n, double delta);

struct BoundInputs {
  std::int64_t n = 0;
  std::int64_t m = 0;
  int vc_dim = 1;
  double epsilon = 0.1;
  double delta = 0.05;
  void Validate() const;
};

struct FairnessBound {
  double value = 0.0;      // may be +inf
  double log_value = 0.0;  // natural log of value
  double k = 0.0;          // ln(2 n^2) / (8 eps^2) + 1
  double k_prime = 0.0;    // 2 ln(2 m) / eps^2 + 1
  // The support size the sparsification argument uses, for comparison:
  // 2 ln(2 n^2) / eps^2 + 1.
  double k_sparsify = 0.0;
  bool vacuous = false;    // value >= 1
};

//   8 (2en/d)^{dk} exp(-n eps^2 / 32) + (2en/d)^{dk'} exp(-8 m eps^2)
// evaluated in log space.
FairnessBound FairnessGeneralizationBound(const BoundInputs& inputs);

}  // namespace subjfair

#endif  // SUBJFAIR_METRICS_H_
