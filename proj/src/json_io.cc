#include "subjfair/json_io.h"

#include <cmath>

#include "subjfair/error.h"

namespace subjfair {

Json HypothesisToJson(const Hypothesis& h) {
  Json j;
  if (const auto* lin = h.linear()) {
    j["type"] = "linear";
    j["weights"] = lin->weights;
    j["bias"] = lin->bias;
  } else {
    j["type"] = "tabular";
    j["predictions"] = h.tabular()->predictions;
  }
  return j;
}

Hypothesis HypothesisFromJson(const Json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    if (type == "linear") {
      return Hypothesis::Linear(j.at("weights").get<std::vector<double>>(),
                                j.at("bias").get<double>());
    }
    if (type == "tabular") {
      return Hypothesis::Tabular(
          j.at("predictions").get<std::vector<std::uint8_t>>());
    }
    throw InvalidArgument("unknown hypothesis type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed hypothesis: ") + e.what());
  }
}

Json ClassifierToJson(const RandomizedClassifier& d) {
  Json components = Json::array();
  for (const auto& c : d.components()) {
    Json item;
    item["weight"] = c.weight;
    item["hypothesis"] = HypothesisToJson(c.hypothesis);
    components.push_back(std::move(item));
  }
  Json j;
  j["components"] = std::move(components);
  return j;
}

RandomizedClassifier ClassifierFromJson(const Json& j) {
  try {
    std::vector<MixtureComponent> components;
    for (const auto& item : j.at("components")) {
      components.push_back({HypothesisFromJson(item.at("hypothesis")),
                            item.at("weight").get<double>()});
    }
    return RandomizedClassifier(std::move(components));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed classifier: ") + e.what());
  }
}

Json CertificateToJson(const Certificate& c) {
  Json j;
  j["iterations"] = c.iterations;
  j["realized_lambda_payoff"] = c.realized_lambda;
  j["realized_tau_payoff"] = c.realized_tau;
  j["hindsight_lambda_payoff"] = c.hindsight_lambda;
  j["hindsight_tau_payoff"] = c.hindsight_tau;
  j["lambda_regret"] = c.lambda_regret;
  j["tau_regret"] = c.tau_regret;
  j["lambda_regret_bound"] = c.lambda_bound;
  j["tau_regret_bound"] = c.tau_bound;
  j["xi"] = c.xi;
  j["within_bounds"] = c.within_bounds;
  return j;
}

Json SolveReportToJson(const SolveReport& r, const SolverConfig& config) {
  Json j;
  Json cfg;
  cfg["gamma"] = config.params.gamma;
  cfg["eta"] = config.params.eta;
  cfg["c_lambda"] = config.budgets.c_lambda;
  cfg["c_tau"] = config.budgets.c_tau;
  cfg["nu"] = config.budgets.nu;
  cfg["seed"] = config.seed;
  if (config.t_override) {
    cfg["t_override"] = *config.t_override;
  } else {
    cfg["t_override"] = nullptr;
  }
  cfg["trajectory_stride"] = config.trajectory_stride;
  cfg["early_stop"] = config.early_stop;
  j["config"] = std::move(cfg);
  j["oracle"] = r.oracle;
  j["iterations"] = r.iterations;
  j["planned_iterations"] = r.planned_iterations;
  j["stopped_early"] = r.stopped_early;
  j["mu_lambda"] = r.mu_lambda;
  j["mu_tau"] = r.mu_tau;
  j["active_pairs"] = r.active_pairs;
  j["train_error"] = r.train_error;
  j["max_violation"] = r.max_violation;
  j["weighted_slack"] = r.weighted_slack;
  j["avg_alpha"] = r.avg_alpha;
  j["certificate"] = CertificateToJson(r.certificate);
  Json traj = Json::array();
  for (const auto& row : r.trajectory) {
    traj.push_back(Json::array({row.iteration, row.error, row.max_disparity}));
  }
  j["trajectory_columns"] = Json::array({"iteration", "error", "max_disparity"});
  j["trajectory"] = std::move(traj);
  j["classifier"] = ClassifierToJson(r.classifier);
  return j;
}

Json FairnessLossToJson(const FairnessLossReport& report) {
  Json j;
  j["gamma"] = report.gamma;
  j["pair_count"] = report.pair_count;
  j["mean"] = report.mean;
  Json pairs = Json::array();
  for (const auto& p : report.per_pair) {
    pairs.push_back(Json::array({p.i, p.j, p.loss}));
  }
  j["per_pair"] = std::move(pairs);
  return j;
}

Json FairnessBoundToJson(const FairnessBound& b) {
  Json j;
  j["log_value"] = b.log_value;
  j["log10_value"] = b.log_value / std::log(10.0);
  j["k"] = b.k;
  j["k_prime"] = b.k_prime;
  j["k_sparsify"] = b.k_sparsify;
  j["vacuous"] = b.vacuous;
  return j;
}

Json ParetoRowsToJson(std::span<const ParetoRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["gamma"] = r.gamma;
    j["eta"] = r.eta;
    if (r.failure.empty()) {
      j["error"] = r.error;
      j["max_violation"] = r.max_violation;
      j["weighted_slack"] = r.weighted_slack;
      j["fairness_loss"] = r.fairness_loss;
      j["iterations"] = r.iterations;
    } else {
      j["failure"] = r.failure;
    }
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace subjfair
