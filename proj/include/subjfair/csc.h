#ifndef SUBJFAIR_CSC_H_
#define SUBJFAIR_CSC_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subjfair/dataset.h"
#include "subjfair/hypothesis.h"

namespace subjfair {

// A cost-sensitive classification problem over the rows of a dataset:
// labelling row i with 0 costs costs0[i], with 1 costs costs1[i].
class CscInstance {
 public:
  CscInstance(const Dataset& dataset, std::vector<double> costs0,
              std::vector<double> costs1);

  const Dataset& dataset() const { return *dataset_; }
  const std::vector<double>& costs0() const { return costs0_; }
  const std::vector<double>& costs1() const { return costs1_; }

 private:
  const Dataset* dataset_;
  std::vector<double> costs0_;
  std::vector<double> costs1_;
};

// sum_i h(x_i) c1_i + (1 - h(x_i)) c0_i
double CscObjective(const Hypothesis& h, const CscInstance& instance);
double CscObjective(std::span<const std::uint8_t> predictions,
                    const CscInstance& instance);

// A finite hypothesis class for the exact oracle. Must contain a hypothesis
// that is constant on the dataset it is checked against.
class HypothesisPool {
 public:
  HypothesisPool(std::vector<Hypothesis> hypotheses, const Dataset& dataset);

  // Every labelling of n <= 20 points, ordered by labelling index (bit i is
  // the prediction on row i), so index 0 is the constant-0 classifier.
  static HypothesisPool AllLabellings(const Dataset& dataset);
  // Every distinct labelling induced by a one-dimensional threshold on
  // `feature`, in both orientations, plus the two constants.
  static HypothesisPool Thresholds1d(const Dataset& dataset, int feature);

  const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }
  const std::vector<std::uint8_t>& predictions(int k) const {
    return predictions_[k];
  }
  int size() const { return static_cast<int>(hypotheses_.size()); }

 private:
  std::vector<Hypothesis> hypotheses_;
  std::vector<std::vector<std::uint8_t>> predictions_;
};

// A pool member minimising CscObjective; ties go to the lowest index.
Hypothesis SolveExact(const CscInstance& instance, const HypothesisPool& pool);
int SolveExactIndex(const CscInstance& instance, const HypothesisPool& pool);

// Least-squares linear threshold: regresses the cost advantage
// c0_i - c1_i on [x_i, 1] with ridge 1e-8 and thresholds the fitted score at
// zero. A constant classifier (zero weights, bias -1 or +1) replaces the fit
// when its cost is strictly lower.
Hypothesis SolveHeuristic(const CscInstance& instance);

inline constexpr double kHeuristicRidge = 1e-8;

// The learning primitive used by the solver. Implementations are stateless
// after construction, so Solve may be called concurrently.
class CscOracle {
 public:
  virtual ~CscOracle() = default;
  virtual Hypothesis Solve(const CscInstance& instance) const = 0;
  virtual std::string name() const = 0;
};

class PoolOracle : public CscOracle {
 public:
  explicit PoolOracle(HypothesisPool pool) : pool_(std::move(pool)) {}
  Hypothesis Solve(const CscInstance& instance) const override {
    return SolveExact(instance, pool_);
  }
  std::string name() const override { return "pool"; }
  const HypothesisPool& pool() const { return pool_; }

 private:
  HypothesisPool pool_;
};

// Exact oracle over all 2^n labellings of the instance's rows without
// enumerating them: the objective separates per row, so row i gets 1 exactly
// when c1_i < c0_i. Ties pick 0, which is what a scan of AllLabellings in
// index order returns.
class LabellingOracle : public CscOracle {
 public:
  Hypothesis Solve(const CscInstance& instance) const override;
  std::string name() const override { return "labellings"; }
};

// SolveHeuristic with the normal-equation factorisation cached for one
// dataset. Instances over other datasets are factorised on the fly.
class HeuristicOracle : public CscOracle {
 public:
  explicit HeuristicOracle(const Dataset& dataset);
  Hypothesis Solve(const CscInstance& instance) const override;
  std::string name() const override { return "heuristic"; }

 private:
  const Dataset* dataset_;
  Eigen::MatrixXd design_;
  Eigen::LDLT<Eigen::MatrixXd> normal_;
};

std::unique_ptr<CscOracle> MakeOracle(const std::string& name,
                                      const Dataset& dataset);

}  // namespace subjfair

#endif  // SUBJFAIR_CSC_H_
