#include "support/brute.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "support/lp.h"

namespace subjfair::testing {

Dataset RandomDataset(int n, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);
  FeatureMatrix x(n, d);
  std::vector<std::uint8_t> y(n);
  for (int i = 0; i < n; ++i) {
    for (int f = 0; f < d; ++f) x(i, f) = normal(rng);
    y[i] = coin(rng);
  }
  return Dataset(std::move(x), std::move(y), {});
}

ConstraintSet RandomConstraints(int n, int pairs, int num_judges,
                                bool positive, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> idx(0, n - 1);
  std::uniform_int_distribution<int> count(positive ? 1 : 0, num_judges);
  std::set<UnorderedPair> chosen;
  while (static_cast<int>(chosen.size()) < pairs) {
    const int i = idx(rng), j = idx(rng);
    if (i != j) chosen.insert(UnorderedPair::Of(i, j));
  }
  std::vector<int> counts;
  for (std::size_t k = 0; k < chosen.size(); ++k) counts.push_back(count(rng));
  return ConstraintSet(
      PairSet(std::vector<UnorderedPair>(chosen.begin(), chosen.end())),
      counts, num_judges);
}

std::vector<std::uint8_t> Labelling(std::uint64_t k, int n) {
  std::vector<std::uint8_t> out(n);
  for (int i = 0; i < n; ++i) out[i] = (k >> i) & 1u;
  return out;
}

double BruteLagrangian(const std::vector<std::vector<std::uint8_t>>& labellings,
                       const std::vector<double>& probs, const Dataset& dataset,
                       const ConstraintSet& constraints,
                       const std::vector<double>& lambda,
                       const std::vector<double>& alpha, double tau,
                       const FairnessParams& params) {
  const int n = dataset.size();
  std::vector<double> rate(n, 0.0);
  double err = 0;
  for (std::size_t h = 0; h < labellings.size(); ++h) {
    for (int i = 0; i < n; ++i) {
      rate[i] += probs[h] * labellings[h][i];
      err += probs[h] * (labellings[h][i] != dataset.label(i)) / n;
    }
  }
  std::map<std::pair<int, int>, int> slot;
  const auto& ordered = constraints.pair_set().ordered();
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    slot[{ordered[k].i, ordered[k].j}] = static_cast<int>(k);
  }
  const double size_a = static_cast<double>(ordered.size());
  double value = err;
  double weighted = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto it = slot.find({i, j});
      if (it == slot.end()) continue;  // lambda = 0 outside A
      const int k = it->second;
      value += lambda[k] * (rate[i] - rate[j] - alpha[k] - params.gamma);
      weighted += constraints.Weight(i, j) * alpha[k];
    }
  }
  if (size_a > 0) value += tau * (weighted / size_a - params.eta);
  else value -= tau * params.eta;
  return value;
}

double FairErmOptimum(const Dataset& dataset, const ConstraintSet& constraints,
                      const FairnessParams& params) {
  const int n = dataset.size();
  if (n > 12) throw std::invalid_argument("FairErmOptimum needs n <= 12");
  const int num_h = 1 << n;
  const auto& ordered = constraints.pair_set().ordered();
  const int na = static_cast<int>(ordered.size());
  const int vars = num_h + na;
  LinearProgram lp;
  lp.c.assign(vars, 0.0);
  std::vector<std::vector<std::uint8_t>> hs(num_h);
  for (int h = 0; h < num_h; ++h) {
    hs[h] = Labelling(h, n);
    int wrong = 0;
    for (int i = 0; i < n; ++i) wrong += hs[h][i] != dataset.label(i);
    lp.c[h] = static_cast<double>(wrong) / n;
  }
  for (int k = 0; k < na; ++k) {
    std::vector<double> row(vars, 0.0);
    for (int h = 0; h < num_h; ++h) {
      row[h] = static_cast<double>(hs[h][ordered[k].i]) - hs[h][ordered[k].j];
    }
    row[num_h + k] = -1.0;
    lp.a_ub.push_back(row);
    lp.b_ub.push_back(params.gamma);
  }
  if (na > 0) {
    std::vector<double> row(vars, 0.0);
    for (int k = 0; k < na; ++k) {
      row[num_h + k] = constraints.Weight(ordered[k].i, ordered[k].j) / na;
    }
    lp.a_ub.push_back(row);
    lp.b_ub.push_back(params.eta);
  }
  for (int k = 0; k < na; ++k) {
    std::vector<double> row(vars, 0.0);
    row[num_h + k] = 1.0;
    lp.a_ub.push_back(row);
    lp.b_ub.push_back(1.0);
  }
  std::vector<double> simplex(vars, 0.0);
  for (int h = 0; h < num_h; ++h) simplex[h] = 1.0;
  lp.a_eq.push_back(simplex);
  lp.b_eq.push_back(1.0);
  const auto sol = SolveLp(lp);
  if (!sol.feasible) throw std::runtime_error("fair ERM program infeasible");
  return sol.value;
}

Regrets RecomputeRegrets(const RoundLog& rounds, const ConstraintSet& constraints,
                         const FairnessParams& params,
                         const GuaranteeBudgets& budgets) {
  const auto& ordered = constraints.pair_set().ordered();
  const std::size_t na = ordered.size();
  const std::size_t t_max = rounds.hypothesis.size();
  std::vector<long double> fixed(na, 0.0L);
  long double realized_lambda = 0, realized_tau = 0, slack_total = 0;
  for (std::size_t t = 0; t < t_max; ++t) {
    const auto& pred = rounds.distinct_predictions[rounds.hypothesis[t]];
    long double weighted = 0;
    for (std::size_t k = 0; k < na; ++k) {
      const double a = rounds.alpha[t * na + k];
      const long double zeta = static_cast<long double>(pred[ordered[k].i]) -
                               pred[ordered[k].j] - a - params.gamma;
      fixed[k] += zeta;
      realized_lambda += rounds.lambda[t * na + k] * zeta;
      weighted += constraints.Weight(ordered[k].i, ordered[k].j) * a;
    }
    const long double slack =
        (na ? weighted / static_cast<long double>(na) : 0.0L) - params.eta;
    slack_total += slack;
    realized_tau += rounds.tau[t] * slack;
  }
  long double best_lambda = 0;
  for (std::size_t k = 0; k < na; ++k) {
    best_lambda = std::max(best_lambda, budgets.c_lambda * fixed[k]);
  }
  const long double best_tau = std::max(0.0L, budgets.c_tau * slack_total);
  return {static_cast<double>(best_lambda - realized_lambda),
          static_cast<double>(best_tau - realized_tau)};
}

}  // namespace subjfair::testing
