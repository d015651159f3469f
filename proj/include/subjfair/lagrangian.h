#ifndef SUBJFAIR_LAGRANGIAN_H_
#define SUBJFAIR_LAGRANGIAN_H_

#include <cstdint>
#include <span>
#include <vector>

#include "subjfair/csc.h"
#include "subjfair/dataset.h"
#include "subjfair/hypothesis.h"
#include "subjfair/judgments.h"
#include "subjfair/pairs.h"

namespace subjfair {

struct FairnessParams {
  double gamma = 0.3;
  double eta = 0.0;
  void Validate() const;
};

struct GuaranteeBudgets {
  double c_lambda = 10.0;
  double c_tau = 10.0;
  double nu = 0.05;
  void Validate() const;
};

// Dual play. lambda is indexed like FairProblem::pairs().
struct DualVars {
  std::vector<double> lambda;
  double tau = 0.0;
};

// Primal play. alpha is indexed like FairProblem::pairs(); pairs outside A
// carry an implicit alpha of 1.
struct PrimalVars {
  RandomizedClassifier classifier;
  std::vector<double> alpha;
};

// The data of one Fair ERM instance: the sample and the judged pairs in
// symmetric closure. Holds references; both must outlive it.
class FairProblem {
 public:
  FairProblem(const Dataset& dataset, const ConstraintSet& constraints);

  const Dataset& dataset() const { return *dataset_; }
  const ConstraintSet& constraints() const { return *constraints_; }
  const std::vector<OrderedPair>& pairs() const {
    return constraints_->pair_set().ordered();
  }
  // Weight of every ordered pair.
  const std::vector<double>& weights() const { return weights_; }
  // |A|, the number of ordered pairs.
  int num_pairs() const { return static_cast<int>(weights_.size()); }
  int n() const { return dataset_->size(); }

 private:
  const Dataset* dataset_;
  const ConstraintSet* constraints_;
  std::vector<double> weights_;
};

double EmpiricalErrorOf(std::span<const double> rates, const Dataset& dataset);

// E_{h~D}[h(x_i) - h(x_j)] for every ordered pair of the problem.
std::vector<double> PairDisparities(const RandomizedClassifier& d,
                                    const FairProblem& problem);

// (1/|A|) sum_ij w_ij alpha_ij; 0 when A is empty.
double WeightedSlack(std::span<const double> alpha, const FairProblem& problem);

double LagrangianValue(const PrimalVars& p, const DualVars& dv,
                       const FairProblem& problem,
                       const FairnessParams& params);

// The two halves of the Lagrangian after the error term: the part that
// depends on the classifier, sum_ij lambda_ij disparity_ij, and the part
// that depends on the slacks, which also carries the constants:
//   sum_ij lambda_ij (-alpha_ij - gamma) + tau (weighted slack - eta).
double ClassifierPart(const RandomizedClassifier& d, const DualVars& dv,
                      const FairProblem& problem);
double SlackPart(std::span<const double> alpha, const DualVars& dv,
                 const FairProblem& problem, const FairnessParams& params);

// Lagrangian minus err(D, S).
double Penalty(const PrimalVars& p, const DualVars& dv,
               const FairProblem& problem, const FairnessParams& params);

CscInstance BuildCosts(const FairProblem& problem,
                       std::span<const double> lambda);

// alpha_ij = 1 exactly when tau w_ij / |A| - lambda_ij <= 0.
std::vector<std::uint8_t> BestResponseAlpha(std::span<const double> lambda,
                                            double tau,
                                            const FairProblem& problem);

PrimalVars BestResponsePrimal(const DualVars& dv, const FairProblem& problem,
                              const CscOracle& oracle);

// Vertex best response: all of C_lambda on the ordered pair with the largest
// strictly positive margin (lowest index on ties), tau at C_tau exactly when
// the weighted slack exceeds eta.
DualVars BestResponseDual(const PrimalVars& p, const FairProblem& problem,
                          const FairnessParams& params,
                          const GuaranteeBudgets& budgets);

// The same response computed from disparities and slacks directly.
DualVars BestResponseDual(std::span<const double> disparities,
                          std::span<const double> alpha,
                          const FairProblem& problem,
                          const FairnessParams& params,
                          const GuaranteeBudgets& budgets);

}  // namespace subjfair

#endif  // SUBJFAIR_LAGRANGIAN_H_
