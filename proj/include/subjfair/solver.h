#ifndef SUBJFAIR_SOLVER_H_
#define SUBJFAIR_SOLVER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subjfair/csc.h"
#include "subjfair/lagrangian.h"

namespace subjfair {

struct SolverConfig {
  FairnessParams params;
  GuaranteeBudgets budgets;
  std::optional<std::int64_t> t_override;
  // Recorded in reports. The dynamics themselves draw no randomness.
  std::uint64_t seed = 0;
  std::int64_t trajectory_stride = 100;
  // Stop at a trajectory sample once the averaged play's best-response
  // penalty is at most nu.
  bool early_stop = false;
  // Keep every round's dual play and primal choice in the report.
  bool record_rounds = false;
  void Validate() const;
};

// Live state of the dynamics between rounds.
struct GameState {
  std::vector<double> theta;  // one entry per active ordered pair
  double tau = 0.0;
  std::int64_t iteration = 0;
};

struct TrajectoryRow {
  std::int64_t iteration = 0;
  double error = 0.0;
  // Max over pairs with positive weight of the averaged disparity.
  double max_disparity = 0.0;
};

// Running sums of the dual player's realised payoff, sum_t lambda^t . zeta^t
// and sum_t tau^t g^t, where zeta^t_ij = disparity - alpha - gamma and g^t is
// the weighted slack minus eta.
struct DualPayoffs {
  double lambda = 0.0;
  double tau = 0.0;
};

// Every round of a run, flattened. lambda holds T rows of |A| entries.
struct RoundLog {
  std::vector<std::int32_t> hypothesis;  // index into distinct plays
  std::vector<double> lambda;
  std::vector<double> tau;
  std::vector<std::uint8_t> alpha;       // T rows of |A| entries
  std::vector<std::vector<std::uint8_t>> distinct_predictions;
};

struct Certificate {
  std::int64_t iterations = 0;
  double realized_lambda = 0.0;
  double realized_tau = 0.0;
  double hindsight_lambda = 0.0;
  double hindsight_tau = 0.0;
  double lambda_regret = 0.0;
  double tau_regret = 0.0;
  double lambda_bound = 0.0;  // 2 C_lambda sqrt(T ln n)
  double tau_bound = 0.0;     // C_tau sqrt(T)
  double xi = 0.0;            // (lambda_regret + tau_regret) / T
  bool within_bounds = false;
};

struct SolveReport {
  explicit SolveReport(RandomizedClassifier d) : classifier(std::move(d)) {}

  RandomizedClassifier classifier;  // averaged play, compacted
  std::vector<double> avg_alpha;
  std::int64_t iterations = 0;
  std::int64_t planned_iterations = 0;
  bool stopped_early = false;
  double mu_lambda = 0.0;
  double mu_tau = 0.0;
  double train_error = 0.0;
  double max_violation = 0.0;
  double weighted_slack = 0.0;
  int active_pairs = 0;
  std::optional<DualPayoffs> payoffs;
  Certificate certificate;
  std::vector<TrajectoryRow> trajectory;
  std::optional<RoundLog> rounds;
  std::string oracle;
};

// ceil(((2 c_lambda sqrt(log_n) + c_tau) / nu)^2).
std::int64_t IterationCount(double c_lambda, double c_tau, double nu,
                            double log_n);
std::int64_t ComputeIterations(const GuaranteeBudgets& budgets, int n);

// C_lambda exp(theta_k) / (1 + sum exp(theta)), shifted by max(theta, 0)
// before exponentiating.
std::vector<double> EgWeights(std::span<const double> theta, double c_lambda);

// theta_k += mu C_lambda (disparity_k - alpha_k - gamma), then returns
// EgWeights. The C_lambda factor makes mu the Hedge rate on the scaled
// payoffs lambda_k zeta_k, which is what the regret bound assumes.
std::vector<double> EgUpdate(std::vector<double>& theta,
                             std::span<const double> disparities,
                             std::span<const double> alpha, double gamma,
                             double mu, double c_lambda);

// proj_[0, c_tau](tau + mu (weighted_slack - eta)).
double OgdUpdate(double tau, double weighted_slack, double eta, double mu,
                 double c_tau);

// Ordered pairs whose constraint can bind: weight > 0 and gamma < 1. The
// dual keeps lambda at zero elsewhere, since the primal answer there is
// alpha = 1 and the margin is never positive.
std::vector<int> ActivePairs(const FairProblem& problem,
                             const FairnessParams& params);

SolveReport Solve(const FairProblem& problem, const SolverConfig& config,
                  const CscOracle& oracle);

Certificate Certify(const SolveReport& report, const FairProblem& problem,
                    const FairnessParams& params,
                    const GuaranteeBudgets& budgets);

struct ParetoRow {
  double gamma = 0.0;
  double eta = 0.0;
  double error = 0.0;
  double max_violation = 0.0;
  double weighted_slack = 0.0;
  double fairness_loss = 0.0;
  std::int64_t iterations = 0;
  std::string failure;  // empty on success
};

// One solve per (gamma, eta) in the cartesian grid, gamma-major. Points run
// on up to `threads` OpenMP threads (0 = runtime default); a failing point
// is reported in its row and the sweep continues.
std::vector<ParetoRow> ParetoSweep(const FairProblem& problem,
                                   const SolverConfig& base,
                                   std::span<const double> gamma_grid,
                                   std::span<const double> eta_grid,
                                   const CscOracle& oracle, int threads = 0);

std::string ParetoCsv(std::span<const ParetoRow> rows);

}  // namespace subjfair

#endif  // SUBJFAIR_SOLVER_H_
