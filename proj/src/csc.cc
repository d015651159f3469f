#include "subjfair/csc.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "subjfair/error.h"

namespace subjfair {
namespace {

Eigen::MatrixXd AugmentedDesign(const Dataset& dataset) {
  const int n = dataset.size();
  const int d = dataset.dim();
  Eigen::MatrixXd x(n, d + 1);
  x.leftCols(d) = dataset.features();
  x.col(d).setOnes();
  return x;
}

Eigen::LDLT<Eigen::MatrixXd> FactorNormalEquations(
    const Eigen::MatrixXd& design) {
  Eigen::MatrixXd gram = design.transpose() * design;
  gram.diagonal().array() += kHeuristicRidge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      !(ldlt.rcond() > 1e-15)) {
    throw Error("heuristic oracle: degenerate design matrix after ridge");
  }
  return ldlt;
}

Hypothesis FitThreshold(const Eigen::MatrixXd& design,
                        const Eigen::LDLT<Eigen::MatrixXd>& normal,
                        const CscInstance& instance) {
  const auto n = design.rows();
  Eigen::VectorXd advantage(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    advantage[i] = instance.costs0()[i] - instance.costs1()[i];
  }
  const Eigen::VectorXd beta = normal.solve(design.transpose() * advantage);
  if (!beta.allFinite()) {
    throw Error("heuristic oracle: non-finite regression coefficients");
  }
  const auto d = design.cols() - 1;
  auto best = Hypothesis::Linear(
      std::vector<double>(beta.data(), beta.data() + d), beta[d]);
  // Constant thresholds are in the class; never return something costlier.
  double best_value = CscObjective(best, instance);
  for (double bias : {-1.0, 1.0}) {
    auto constant = Hypothesis::Linear(std::vector<double>(d, 0.0), bias);
    const double value = CscObjective(constant, instance);
    if (value < best_value) {
      best = std::move(constant);
      best_value = value;
    }
  }
  return best;
}

}  // namespace

CscInstance::CscInstance(const Dataset& dataset, std::vector<double> costs0,
                         std::vector<double> costs1)
    : dataset_(&dataset),
      costs0_(std::move(costs0)),
      costs1_(std::move(costs1)) {
  const auto n = static_cast<std::size_t>(dataset.size());
  if (costs0_.size() != n || costs1_.size() != n) {
    throw InvalidArgument("cost vectors must have length n");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(costs0_[i]) || !std::isfinite(costs1_[i])) {
      throw InvalidArgument("costs must be finite");
    }
  }
}

double CscObjective(std::span<const std::uint8_t> predictions,
                    const CscInstance& instance) {
  if (predictions.size() != instance.costs0().size()) {
    throw InvalidArgument("prediction vector length differs from n");
  }
  double total = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    total += predictions[i] ? instance.costs1()[i] : instance.costs0()[i];
  }
  return total;
}

double CscObjective(const Hypothesis& h, const CscInstance& instance) {
  return CscObjective(PredictAll(h, instance.dataset()), instance);
}

HypothesisPool::HypothesisPool(std::vector<Hypothesis> hypotheses,
                               const Dataset& dataset)
    : hypotheses_(std::move(hypotheses)) {
  if (hypotheses_.empty()) throw InvalidArgument("hypothesis pool is empty");
  bool has_constant = false;
  predictions_.reserve(hypotheses_.size());
  for (const auto& h : hypotheses_) {
    auto p = PredictAll(h, dataset);
    if (std::adjacent_find(p.begin(), p.end(), std::not_equal_to<>()) ==
        p.end()) {
      has_constant = true;
    }
    predictions_.push_back(std::move(p));
  }
  if (!has_constant) {
    throw InvalidArgument("hypothesis pool must contain a constant classifier");
  }
}

HypothesisPool HypothesisPool::AllLabellings(const Dataset& dataset) {
  const int n = dataset.size();
  if (n > 20) throw InvalidArgument("AllLabellings is limited to n <= 20");
  std::vector<Hypothesis> hs;
  hs.reserve(std::size_t{1} << n);
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    hs.push_back(Hypothesis::FromLabellingIndex(k, n));
  }
  return HypothesisPool(std::move(hs), dataset);
}

HypothesisPool HypothesisPool::Thresholds1d(const Dataset& dataset,
                                            int feature) {
  if (feature < 0 || feature >= dataset.dim()) {
    throw InvalidArgument("threshold feature out of range");
  }
  const int n = dataset.size();
  std::set<double> values;
  for (int i = 0; i < n; ++i) values.insert(dataset.features()(i, feature));
  std::set<std::vector<std::uint8_t>> seen;
  std::vector<Hypothesis> hs;
  auto add = [&](std::vector<std::uint8_t> p) {
    if (seen.insert(p).second) hs.push_back(Hypothesis::Tabular(std::move(p)));
  };
  add(std::vector<std::uint8_t>(n, 0));
  add(std::vector<std::uint8_t>(n, 1));
  for (double t : values) {
    std::vector<std::uint8_t> above(n), below(n);
    for (int i = 0; i < n; ++i) {
      above[i] = dataset.features()(i, feature) >= t;
      below[i] = 1 - above[i];
    }
    add(std::move(above));
    add(std::move(below));
  }
  return HypothesisPool(std::move(hs), dataset);
}

int SolveExactIndex(const CscInstance& instance, const HypothesisPool& pool) {
  int best = 0;
  double best_value = CscObjective(pool.predictions(0), instance);
  for (int k = 1; k < pool.size(); ++k) {
    const double value = CscObjective(pool.predictions(k), instance);
    if (value < best_value) {
      best = k;
      best_value = value;
    }
  }
  return best;
}

Hypothesis SolveExact(const CscInstance& instance, const HypothesisPool& pool) {
  return pool.hypotheses()[SolveExactIndex(instance, pool)];
}

Hypothesis SolveHeuristic(const CscInstance& instance) {
  return HeuristicOracle(instance.dataset()).Solve(instance);
}

Hypothesis LabellingOracle::Solve(const CscInstance& instance) const {
  const auto n = instance.costs0().size();
  std::vector<std::uint8_t> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = instance.costs1()[i] < instance.costs0()[i] ? 1 : 0;
  }
  return Hypothesis::Tabular(std::move(p));
}

HeuristicOracle::HeuristicOracle(const Dataset& dataset)
    : dataset_(&dataset),
      design_(AugmentedDesign(dataset)),
      normal_(FactorNormalEquations(design_)) {}

Hypothesis HeuristicOracle::Solve(const CscInstance& instance) const {
  if (&instance.dataset() == dataset_) {
    return FitThreshold(design_, normal_, instance);
  }
  const auto design = AugmentedDesign(instance.dataset());
  return FitThreshold(design, FactorNormalEquations(design), instance);
}

std::unique_ptr<CscOracle> MakeOracle(const std::string& name,
                                      const Dataset& dataset) {
  if (name == "heuristic") return std::make_unique<HeuristicOracle>(dataset);
  if (name == "labellings") return std::make_unique<LabellingOracle>();
  if (name == "pool") {
    return std::make_unique<PoolOracle>(HypothesisPool::AllLabellings(dataset));
  }
  throw InvalidArgument("unknown oracle '" + name +
                        "' (expected heuristic, labellings or pool)");
}

}  // namespace subjfair
