#include "subjfair/solver.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>

#include <omp.h>

#include "subjfair/error.h"
#include "subjfair/kernels.h"
#include "subjfair/metrics.h"

namespace subjfair {
namespace {

// Neumaier compensated sum.
class KahanSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

double MaxMargin(std::span<const double> disp, std::span<const double> alpha,
                 double gamma) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < disp.size(); ++k) {
    best = std::max(best, disp[k] - alpha[k] - gamma);
  }
  return best;
}

// Value of the vertex best response per round, on averaged play.
double HindsightRate(std::span<const double> disp,
                     std::span<const double> alpha, const FairProblem& problem,
                     const FairnessParams& params,
                     const GuaranteeBudgets& budgets, double* tau_part) {
  const auto dv = BestResponseDual(disp, alpha, problem, params, budgets);
  double lambda_part = 0;
  for (int k = 0; k < problem.num_pairs(); ++k) {
    lambda_part += dv.lambda[k] * (disp[k] - alpha[k] - params.gamma);
  }
  *tau_part = dv.tau * (WeightedSlack(alpha, problem) - params.eta);
  return lambda_part;
}

}  // namespace

void SolverConfig::Validate() const {
  params.Validate();
  budgets.Validate();
  if (t_override && *t_override < 1) {
    throw InvalidArgument("t_override must be >= 1");
  }
  if (trajectory_stride < 1) {
    throw InvalidArgument("trajectory_stride must be >= 1");
  }
}

std::int64_t IterationCount(double c_lambda, double c_tau, double nu,
                            double log_n) {
  if (!(nu > 0.0)) throw InvalidArgument("nu must be positive");
  if (c_lambda < 0 || c_tau < 0 || log_n < 0) {
    throw InvalidArgument("iteration count inputs must be non-negative");
  }
  const double root = (2.0 * c_lambda * std::sqrt(log_n) + c_tau) / nu;
  const double t = std::ceil(root * root);
  if (!(t < 9.0e18)) throw InvalidArgument("iteration count overflows");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(t));
}

std::int64_t ComputeIterations(const GuaranteeBudgets& budgets, int n) {
  if (n < 2) throw InvalidArgument("iteration count needs n >= 2");
  budgets.Validate();
  return IterationCount(budgets.c_lambda, budgets.c_tau, budgets.nu,
                        std::log(static_cast<double>(n)));
}

std::vector<double> EgWeights(std::span<const double> theta, double c_lambda) {
  double shift = 0.0;
  for (double t : theta) shift = std::max(shift, t);
  double denom = std::exp(-shift);
  std::vector<double> out(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    out[k] = std::exp(theta[k] - shift);
    denom += out[k];
  }
  for (double& v : out) v = c_lambda * v / denom;
  return out;
}

std::vector<double> EgUpdate(std::vector<double>& theta,
                             std::span<const double> disparities,
                             std::span<const double> alpha, double gamma,
                             double mu, double c_lambda) {
  if (!(mu > 0.0)) throw InvalidArgument("mu_lambda must be positive");
  if (disparities.size() != theta.size() || alpha.size() != theta.size()) {
    throw InvalidArgument("eg update: length mismatch");
  }
  for (std::size_t k = 0; k < theta.size(); ++k) {
    theta[k] += mu * c_lambda * (disparities[k] - alpha[k] - gamma);
  }
  return EgWeights(theta, c_lambda);
}

double OgdUpdate(double tau, double weighted_slack, double eta, double mu,
                 double c_tau) {
  if (!(mu > 0.0)) throw InvalidArgument("mu_tau must be positive");
  return std::clamp(tau + mu * (weighted_slack - eta), 0.0, c_tau);
}

std::vector<int> ActivePairs(const FairProblem& problem,
                             const FairnessParams& params) {
  std::vector<int> active;
  if (params.gamma >= 1.0) return active;
  for (int k = 0; k < problem.num_pairs(); ++k) {
    if (problem.weights()[k] > 0.0) active.push_back(k);
  }
  return active;
}

SolveReport Solve(const FairProblem& problem, const SolverConfig& config,
                  const CscOracle& oracle) {
  config.Validate();
  const auto& params = config.params;
  const auto& budgets = config.budgets;
  const Dataset& ds = problem.dataset();
  const int n = problem.n();
  const int m = problem.num_pairs();
  const auto& pairs = problem.pairs();
  const auto active = ActivePairs(problem, params);

  const std::int64_t planned =
      config.t_override ? *config.t_override : ComputeIterations(budgets, n);
  const double mu_lambda =
      std::sqrt(std::log(static_cast<double>(n)) / planned) / budgets.c_lambda;
  const double mu_tau = budgets.c_tau / std::sqrt(static_cast<double>(planned));

  GameState state;
  state.theta.assign(active.size(), 0.0);
  std::vector<double> lambda(m, 0.0);
  std::vector<double> alpha_real(m, 0.0);
  double slack_prev = WeightedSlack(alpha_real, problem);

  std::unordered_map<std::string, int> index_of;
  std::vector<Hypothesis> distinct;
  std::vector<std::int64_t> plays;
  std::vector<std::int64_t> positives(n, 0);
  std::vector<std::int64_t> alpha_counts(m, 0);
  KahanSum lambda_payoff, tau_payoff;

  std::vector<TrajectoryRow> trajectory;
  bool stopped_early = false;
  RoundLog log;
  if (config.record_rounds) {
    log.hypothesis.reserve(planned);
    log.lambda.reserve(static_cast<std::size_t>(planned) * m);
    log.tau.reserve(planned);
    log.alpha.reserve(static_cast<std::size_t>(planned) * m);
  }

  std::vector<double> rates(n), disp(m), avg_alpha(m);
  auto sample = [&](std::int64_t t) {
    for (int i = 0; i < n; ++i) {
      rates[i] = static_cast<double>(positives[i]) / t;
    }
    kernels::PairDisparities(rates, pairs, disp);
    TrajectoryRow row{t, EmpiricalErrorOf(rates, ds), 0.0};
    for (int k = 0; k < m; ++k) {
      if (problem.weights()[k] > 0.0) {
        row.max_disparity = std::max(row.max_disparity, disp[k]);
      }
    }
    trajectory.push_back(row);
  };

  std::int64_t t = 0;
  while (t < planned) {
    ++t;
    state.tau = OgdUpdate(state.tau, slack_prev, params.eta, mu_tau,
                          budgets.c_tau);
    const auto weights = EgWeights(state.theta, budgets.c_lambda);
    for (std::size_t a = 0; a < active.size(); ++a) {
      lambda[active[a]] = weights[a];
    }

    std::optional<Hypothesis> h;
    std::vector<std::uint8_t> pred;
    try {
      h = oracle.Solve(BuildCosts(problem, lambda));
      pred = PredictAll(*h, ds);
    } catch (const std::exception& e) {
      throw Error("oracle failed at iteration " + std::to_string(t) + ": " +
                  e.what());
    }
    const auto alpha = BestResponseAlpha(lambda, state.tau, problem);
    for (int k = 0; k < m; ++k) alpha_real[k] = alpha[k];

    double round_payoff = 0;
    for (int k = 0; k < m; ++k) {
      const double zeta =
          static_cast<double>(pred[pairs[k].i]) - pred[pairs[k].j] -
          alpha[k] - params.gamma;
      disp[k] = zeta;
      round_payoff += lambda[k] * zeta;
    }
    lambda_payoff.Add(round_payoff);
    const double slack = WeightedSlack(alpha_real, problem);
    tau_payoff.Add(state.tau * (slack - params.eta));
    for (std::size_t a = 0; a < active.size(); ++a) {
      state.theta[a] += mu_lambda * budgets.c_lambda * disp[active[a]];
    }
    slack_prev = slack;
    state.iteration = t;

    std::string key(pred.begin(), pred.end());
    auto [it, inserted] = index_of.try_emplace(std::move(key),
                                               static_cast<int>(distinct.size()));
    if (inserted) {
      distinct.push_back(std::move(*h));
      plays.push_back(0);
      if (config.record_rounds) log.distinct_predictions.push_back(pred);
    }
    ++plays[it->second];
    for (int i = 0; i < n; ++i) positives[i] += pred[i];
    for (int k = 0; k < m; ++k) alpha_counts[k] += alpha[k];
    if (config.record_rounds) {
      log.hypothesis.push_back(it->second);
      log.lambda.insert(log.lambda.end(), lambda.begin(), lambda.end());
      log.tau.push_back(state.tau);
      log.alpha.insert(log.alpha.end(), alpha.begin(), alpha.end());
    }

    if (t % config.trajectory_stride == 0 || t == planned) {
      sample(t);
      if (config.early_stop && t < planned) {
        for (int k = 0; k < m; ++k) {
          avg_alpha[k] = static_cast<double>(alpha_counts[k]) / t;
        }
        double tau_part = 0;
        const double lambda_part = HindsightRate(disp, avg_alpha, problem,
                                                 params, budgets, &tau_part);
        if (lambda_part + tau_part <= budgets.nu) {
          stopped_early = true;
          break;
        }
      }
    }
  }
  if (trajectory.empty() || trajectory.back().iteration != t) sample(t);

  std::vector<MixtureComponent> components;
  components.reserve(distinct.size());
  for (std::size_t h = 0; h < distinct.size(); ++h) {
    components.push_back(
        {std::move(distinct[h]), static_cast<double>(plays[h]) / t});
  }
  SolveReport report{RandomizedClassifier(std::move(components))};
  report.iterations = t;
  report.planned_iterations = planned;
  report.stopped_early = stopped_early;
  report.mu_lambda = mu_lambda;
  report.mu_tau = mu_tau;
  report.active_pairs = static_cast<int>(active.size());
  report.oracle = oracle.name();
  report.trajectory = std::move(trajectory);
  report.avg_alpha.resize(m);
  for (int k = 0; k < m; ++k) {
    report.avg_alpha[k] = static_cast<double>(alpha_counts[k]) / t;
  }
  const auto final_disp = PairDisparities(report.classifier, problem);
  report.train_error = EmpiricalError(report.classifier, ds);
  report.max_violation =
      m ? MaxMargin(final_disp, report.avg_alpha, params.gamma) : 0.0;
  report.weighted_slack = WeightedSlack(report.avg_alpha, problem);
  report.payoffs = DualPayoffs{lambda_payoff.value(), tau_payoff.value()};
  if (config.record_rounds) report.rounds = std::move(log);
  report.certificate = Certify(report, problem, params, budgets);
  return report;
}

Certificate Certify(const SolveReport& report, const FairProblem& problem,
                    const FairnessParams& params,
                    const GuaranteeBudgets& budgets) {
  if (!report.payoffs) throw InvalidArgument("trajectory missing");
  if (report.avg_alpha.size() != static_cast<std::size_t>(problem.num_pairs())) {
    throw InvalidArgument("report does not match the problem's pair set");
  }
  const double t = static_cast<double>(report.iterations);
  const auto disp = PairDisparities(report.classifier, problem);
  double tau_rate = 0;
  const double lambda_rate = HindsightRate(disp, report.avg_alpha, problem,
                                           params, budgets, &tau_rate);
  Certificate c;
  c.iterations = report.iterations;
  c.realized_lambda = report.payoffs->lambda;
  c.realized_tau = report.payoffs->tau;
  c.hindsight_lambda = t * lambda_rate;
  c.hindsight_tau = t * tau_rate;
  c.lambda_regret = c.hindsight_lambda - c.realized_lambda;
  c.tau_regret = c.hindsight_tau - c.realized_tau;
  c.lambda_bound = 2.0 * budgets.c_lambda *
                   std::sqrt(t * std::log(static_cast<double>(problem.n())));
  c.tau_bound = budgets.c_tau * std::sqrt(t);
  c.xi = (c.lambda_regret + c.tau_regret) / t;
  c.within_bounds =
      c.lambda_regret <= c.lambda_bound && c.tau_regret <= c.tau_bound;
  return c;
}

std::vector<ParetoRow> ParetoSweep(const FairProblem& problem,
                                   const SolverConfig& base,
                                   std::span<const double> gamma_grid,
                                   std::span<const double> eta_grid,
                                   const CscOracle& oracle, int threads) {
  if (gamma_grid.empty() || eta_grid.empty()) {
    throw InvalidArgument("pareto grids must be non-empty");
  }
  for (double g : gamma_grid) FairnessParams{g, 0.0}.Validate();
  for (double e : eta_grid) FairnessParams{0.0, e}.Validate();
  const int points = static_cast<int>(gamma_grid.size() * eta_grid.size());
  std::vector<ParetoRow> rows(points);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (int p = 0; p < points; ++p) {
    ParetoRow& row = rows[p];
    row.gamma = gamma_grid[p / eta_grid.size()];
    row.eta = eta_grid[p % eta_grid.size()];
    try {
      SolverConfig config = base;
      config.params = {row.gamma, row.eta};
      config.record_rounds = false;
      const auto report = Solve(problem, config, oracle);
      row.error = report.train_error;
      row.max_violation = report.max_violation;
      row.weighted_slack = report.weighted_slack;
      row.iterations = report.iterations;
      row.fairness_loss =
          problem.constraints().pair_set().empty()
              ? 0.0
              : FairnessLossSet(report.classifier, problem.dataset(),
                                problem.constraints(), row.gamma)
                    .mean;
    } catch (const std::exception& e) {
      row.failure = e.what();
    }
  }
  return rows;
}

std::string ParetoCsv(std::span<const ParetoRow> rows) {
  std::string out = "gamma,eta,error,max_violation,weighted_slack,fairness_loss\n";
  char buf[256];
  for (const auto& r : rows) {
    if (r.failure.empty()) {
      std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.10g,%.10g,%.10g,%.10g\n",
                    r.gamma, r.eta, r.error, r.max_violation, r.weighted_slack,
                    r.fairness_loss);
    } else {
      std::snprintf(buf, sizeof buf, "%.6g,%.6g,nan,nan,nan,nan\n", r.gamma,
                    r.eta);
    }
    out += buf;
  }
  return out;
}

}  // namespace subjfair
