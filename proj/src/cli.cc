#include "subjfair/cli.h"

#include <pthread.h>
#include <signal.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "subjfair/config.h"
#include "subjfair/csc.h"
#include "subjfair/dataset.h"
#include "subjfair/digest.h"
#include "subjfair/error.h"
#include "subjfair/json_io.h"
#include "subjfair/judgments.h"
#include "subjfair/lagrangian.h"
#include "subjfair/metrics.h"
#include "subjfair/service.h"
#include "subjfair/solver.h"

namespace subjfair {
namespace {

namespace fs = std::filesystem;

// Flags that override the config file, keyed like the file.
class ConfigFlags {
 public:
  void Register(CLI::App* app, bool grids) {
    Add(app, "--config", "config", "key = value config file");
    Add(app, "--gamma", "gamma", "per-pair disparity budget (default 0.3)");
    Add(app, "--eta", "eta", "weighted slack budget (default 0)");
    Add(app, "--c-lambda", "c_lambda", "dual budget for pair multipliers");
    Add(app, "--c-tau", "c_tau", "dual budget for the slack multiplier");
    Add(app, "--nu", "nu", "target approximation (default 0.05)");
    Add(app, "--seed", "seed", "seed recorded in outputs");
    Add(app, "--iterations", "t_override",
        "iteration count instead of the guarantee's T");
    Add(app, "--trajectory-stride", "trajectory_stride",
        "iterations between trajectory samples");
    Add(app, "--oracle", "oracle", "heuristic | labellings | pool");
    Add(app, "--label-column", "label_column", "label column of the dataset");
    Add(app, "--early-stop", "early_stop",
        "true to stop once the averaged play certifies nu");
    if (grids) {
      Add(app, "--gammas", "gamma_grid", "comma-separated gamma grid");
      Add(app, "--etas", "eta_grid", "comma-separated eta grid");
      Add(app, "--threads", "threads", "worker threads (0 = all cores)");
    }
  }

  RunConfig Resolve() const {
    RunConfig config;
    KeyValues flags;
    std::string file;
    for (const auto& [key, opt] : options_) {
      if (opt->count() == 0) continue;
      if (key == "config") {
        file = values_.at(key);
      } else {
        flags[key] = values_.at(key);
      }
    }
    if (!file.empty()) ApplyKeyValues(config, ReadKeyValueFile(file), file);
    ApplyKeyValues(config, flags, "command line");
    config.ToSolverConfig();
    return config;
  }

 private:
  void Add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    options_.emplace_back(key, app->add_option(flag, values_[key], help));
  }

  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
};

Json ConfigToJson(const RunConfig& c) {
  Json j;
  j["gamma"] = c.gamma;
  j["eta"] = c.eta;
  j["c_lambda"] = c.c_lambda;
  j["c_tau"] = c.c_tau;
  j["nu"] = c.nu;
  j["seed"] = c.seed;
  if (c.t_override) {
    j["t_override"] = *c.t_override;
  } else {
    j["t_override"] = nullptr;
  }
  j["trajectory_stride"] = c.trajectory_stride;
  j["early_stop"] = c.early_stop;
  j["oracle"] = c.oracle;
  j["label_column"] = c.label_column;
  j["gamma_grid"] = c.gamma_grid;
  j["eta_grid"] = c.eta_grid;
  return j;
}

Json FileEntry(const std::string& role, const fs::path& path) {
  Json j;
  j["role"] = role;
  j["path"] = path.string();
  j["sha256"] = Sha256File(path);
  return j;
}

void WriteJson(const fs::path& path, const Json& j) {
  WriteFileAtomic(path, j.dump(2) + "\n");
}

fs::path ManifestPath(const fs::path& out, const std::string& flag) {
  if (!flag.empty()) return flag;
  auto p = out;
  p += ".manifest.json";
  return p;
}

struct Inputs {
  Dataset dataset;
  std::vector<JudgeResponse> responses;
  ConstraintSet constraints;
};

Inputs LoadInputs(const std::string& data, const std::string& judgments,
                  const RunConfig& config, int num_judges, std::ostream& err) {
  auto dataset = LoadDataset(data, config.label_column);
  std::vector<JudgeResponse> responses;
  if (!judgments.empty()) responses = ReadJudgments(judgments);
  if (responses.empty()) {
    err << "warning: no judgments; solving the unconstrained problem\n";
  }
  auto constraints = BuildConstraintsFromLog(
      responses, num_judges > 0 ? std::optional<int>(num_judges)
                                : std::nullopt);
  return {std::move(dataset), std::move(responses), std::move(constraints)};
}

Json ConstraintSummary(const ConstraintSet& c) {
  Json j;
  j["num_judges"] = c.num_judges();
  j["pairs"] = c.pair_set().num_unordered();
  j["constrained_pairs"] = c.num_constrained();
  j["digest"] = Sha256Hex(ConstraintSetToJson(c));
  return j;
}

int CmdTrain(const std::string& data, const std::string& judgments,
             const std::string& out_path, const std::string& manifest_flag,
             int num_judges, const ConfigFlags& flags, std::ostream& out,
             std::ostream& err) {
  const auto config = flags.Resolve();
  const auto in = LoadInputs(data, judgments, config, num_judges, err);
  const FairProblem problem(in.dataset, in.constraints);
  const auto oracle = MakeOracle(config.oracle, in.dataset);
  const auto solver_config = config.ToSolverConfig();
  const auto report = Solve(problem, solver_config, *oracle);

  Json j = SolveReportToJson(report, solver_config);
  j["constraints"] = ConstraintSummary(in.constraints);
  if (!in.constraints.pair_set().empty()) {
    j["fairness_loss"] = FairnessLossSet(report.classifier, in.dataset,
                                         in.constraints, config.gamma)
                             .mean;
  } else {
    j["fairness_loss"] = 0.0;
  }
  WriteJson(out_path, j);

  Json manifest;
  manifest["command"] = "train";
  manifest["version"] = kVersion;
  manifest["config"] = ConfigToJson(config);
  manifest["seed"] = config.seed;
  Json inputs = Json::array({FileEntry("dataset", data)});
  if (!judgments.empty()) inputs.push_back(FileEntry("judgments", judgments));
  manifest["inputs"] = std::move(inputs);
  manifest["outputs"] = Json::array({FileEntry("report", out_path)});
  WriteJson(ManifestPath(out_path, manifest_flag), manifest);

  char line[256];
  std::snprintf(line, sizeof line,
                "iterations %lld  error %.6f  max_violation %.6f  "
                "weighted_slack %.6f\n",
                static_cast<long long>(report.iterations), report.train_error,
                report.max_violation, report.weighted_slack);
  out << line;
  return 0;
}

int CmdSweep(const std::string& data, std::string judgments,
             const std::string& out_path, const std::string& session_dir,
             const std::string& manifest_flag, int num_judges,
             const ConfigFlags& flags, std::ostream& out, std::ostream& err) {
  if (out_path.empty() && session_dir.empty()) {
    throw InvalidArgument("sweep needs --out or --session-dir");
  }
  if (judgments.empty() && !session_dir.empty()) {
    judgments = (fs::path(session_dir) / kJudgmentLog).string();
    if (!fs::exists(judgments)) judgments.clear();
  }
  const auto config = flags.Resolve();
  const auto in = LoadInputs(data, judgments, config, num_judges, err);
  const FairProblem problem(in.dataset, in.constraints);
  const auto oracle = MakeOracle(config.oracle, in.dataset);
  const auto rows = ParetoSweep(problem, config.ToSolverConfig(),
                                config.gamma_grid, config.eta_grid, *oracle,
                                config.threads);
  int failures = 0;
  for (const auto& r : rows) {
    if (!r.failure.empty()) {
      ++failures;
      err << "point gamma=" << r.gamma << " eta=" << r.eta
          << " failed: " << r.failure << "\n";
    }
  }

  Json manifest;
  manifest["command"] = "sweep";
  manifest["version"] = kVersion;
  manifest["config"] = ConfigToJson(config);
  manifest["seed"] = config.seed;
  Json inputs = Json::array({FileEntry("dataset", data)});
  if (!judgments.empty()) inputs.push_back(FileEntry("judgments", judgments));
  manifest["inputs"] = std::move(inputs);
  Json points = Json::array();
  for (const auto& r : rows) {
    Json p;
    p["gamma"] = r.gamma;
    p["eta"] = r.eta;
    p["status"] = r.failure.empty() ? "ok" : "failed";
    points.push_back(std::move(p));
  }
  manifest["points"] = std::move(points);
  Json outputs = Json::array();

  fs::path manifest_base;
  if (!out_path.empty()) {
    WriteFileAtomic(out_path, ParetoCsv(rows));
    outputs.push_back(FileEntry("curve", out_path));
    manifest_base = out_path;
  }
  if (!session_dir.empty()) {
    Json results;
    results["session_id"] = fs::path(session_dir).filename().string();
    results["constraint_digest"] = Sha256Hex(ConstraintSetToJson(in.constraints));
    results["num_judges"] = in.constraints.num_judges();
    Json counts = Json::object();
    for (const auto& [judge, c] : SameCounts(in.responses)) counts[judge] = c;
    results["judge_same_counts"] = std::move(counts);
    results["config"] = ConfigToJson(config);
    results["rows"] = ParetoRowsToJson(rows);
    const auto path = fs::path(session_dir) / kResultsFile;
    WriteJson(path, results);
    outputs.push_back(FileEntry("results", path));
    if (manifest_base.empty()) manifest_base = path;
  }
  manifest["outputs"] = std::move(outputs);
  WriteJson(ManifestPath(manifest_base, manifest_flag), manifest);

  out << ParetoCsv(rows);
  return failures == 0 ? 0 : 3;
}

int CmdBounds(std::int64_t n, std::int64_t m, int vc_dim, double epsilon,
              double delta, bool json, std::ostream& out) {
  BoundInputs in{n, m, vc_dim, epsilon, delta};
  in.Validate();
  const double error = ErrorBound(vc_dim, n, delta);
  const auto bound = FairnessGeneralizationBound(in);
  if (json) {
    Json j;
    j["n"] = n;
    j["m"] = m;
    j["vc_dim"] = vc_dim;
    j["epsilon"] = epsilon;
    j["delta"] = delta;
    j["error_bound"] = error;
    j["fairness_bound"] = FairnessBoundToJson(bound);
    if (std::isfinite(bound.value)) j["fairness_bound"]["value"] = bound.value;
    out << j.dump(2) << "\n";
    return 0;
  }
  char buf[512];
  std::snprintf(buf, sizeof buf, "error_bound     %.6e\n", error);
  out << buf;
  if (std::isfinite(bound.value)) {
    std::snprintf(buf, sizeof buf, "fairness_bound  %.6e%s\n", bound.value,
                  bound.vacuous ? "  (vacuous: >= 1)" : "");
  } else {
    std::snprintf(buf, sizeof buf,
                  "fairness_bound  1e%+.3f  (vacuous: >= 1)\n",
                  bound.log_value / std::log(10.0));
  }
  out << buf;
  std::snprintf(buf, sizeof buf, "k               %.6e\nk_prime         %.6e\n",
                bound.k, bound.k_prime);
  out << buf;
  return 0;
}

int CmdSimulate(const std::string& data, const std::string& label_column,
                const std::string& judges, int pairs, std::uint64_t seed,
                const std::string& out_path, std::ostream& out) {
  const auto dataset = LoadDataset(data, label_column);
  const auto specs = LoadJudgeSpecs(judges);
  std::vector<JudgeResponse> all;
  for (const auto& spec : specs) {
    const PairSet set(AssignPairs(dataset.size(), pairs, seed, spec.judge_id));
    auto answers = SimulateJudge(dataset, set, spec);
    all.insert(all.end(), answers.begin(), answers.end());
  }
  WriteJudgments(out_path, all);
  out << all.size() << " judgments from " << specs.size() << " judges\n";
  return 0;
}

int CmdServe(const std::vector<std::string>& sessions,
             const std::string& ui_dir, const std::string& host, int port,
             std::ostream& out) {
  SessionStore store;
  for (const auto& path : sessions) store.Add(SessionConfig::Load(path));
  std::optional<fs::path> ui;
  if (!ui_dir.empty()) ui = ui_dir;
  Server server(store, ui);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  const int bound = server.Bind(host, port);
  out << "listening on http://" << host << ":" << bound << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.Stop();
  });
  server.Run();
  waiter.join();
  return 0;
}

int CmdReport(const std::string& report_path, const std::string& data,
              const std::string& judgments, const std::string& label_column,
              const std::string& holdout, std::ostream& out) {
  Json report;
  try {
    report = Json::parse(ReadFile(report_path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(report_path + ": " + e.what());
  }
  const auto classifier = ClassifierFromJson(report.at("classifier"));
  const double gamma = report.at("config").at("gamma").get<double>();
  const auto dataset = LoadDataset(data, label_column);

  Json j;
  j["report"] = report_path;
  j["components"] = classifier.size();
  j["train_error"] = EmpiricalError(classifier, dataset);
  j["stored_train_error"] = report.at("train_error");
  if (!judgments.empty()) {
    const auto constraints = BuildConstraintsFromLog(ReadJudgments(judgments));
    if (!constraints.pair_set().empty()) {
      j["fairness_loss"] =
          FairnessLossSet(classifier, dataset, constraints, gamma).mean;
    }
    j["constraint_digest"] = Sha256Hex(ConstraintSetToJson(constraints));
  }
  if (!holdout.empty()) {
    j["holdout_error"] =
        EmpiricalError(classifier, LoadDataset(holdout, label_column));
  }
  out << j.dump(2) << "\n";
  const double diff = std::abs(j["train_error"].get<double>() -
                               report.at("train_error").get<double>());
  if (diff > 1e-9) {
    throw Error("recomputed train error differs from the stored value");
  }
  return 0;
}

std::vector<char*> ArgvOf(std::vector<std::string>& storage) {
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return argv;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Fair ERM with elicited pairwise fairness constraints",
               "subjfair");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string data, judgments, out_path, manifest, session_dir, judges;
  std::string label_column = "label", report_path, holdout, ui_dir;
  std::string host = "127.0.0.1";
  std::vector<std::string> sessions;
  int num_judges = 0, pairs = 50, port = 8080;
  std::uint64_t seed = 0;
  std::int64_t n = 0, m = 0;
  int vc_dim = 1;
  double epsilon = 0, delta = 0.05;
  bool json = false;

  auto* train = app.add_subcommand("train", "solve one Fair ERM instance");
  train->add_option("--data", data, "dataset CSV")->required();
  train->add_option("--judgments", judgments, "judgment log (JSONL)");
  train->add_option("--out", out_path, "report JSON to write")->required();
  train->add_option("--manifest", manifest, "manifest path");
  train->add_option("--num-judges", num_judges,
                    "judge count U (default: judges in the log)");
  ConfigFlags train_flags;
  train_flags.Register(train, false);

  auto* sweep = app.add_subcommand("sweep", "Pareto sweep over gamma and eta");
  sweep->add_option("--data", data, "dataset CSV")->required();
  sweep->add_option("--judgments", judgments, "judgment log (JSONL)");
  sweep->add_option("--out", out_path, "curve CSV to write");
  sweep->add_option("--session-dir", session_dir,
                    "session directory: reads its log, writes results.json");
  sweep->add_option("--manifest", manifest, "manifest path");
  sweep->add_option("--num-judges", num_judges, "judge count U");
  ConfigFlags sweep_flags;
  sweep_flags.Register(sweep, true);

  auto* bounds = app.add_subcommand("bounds", "evaluate generalization bounds");
  bounds->add_option("--n", n, "sample size")->required();
  bounds->add_option("--m", m, "number of judged pairs")->required();
  bounds->add_option("--vc-dim", vc_dim, "VC dimension")->required();
  bounds->add_option("--epsilon", epsilon, "accuracy")->required();
  bounds->add_option("--delta", delta, "failure probability");
  bounds->add_flag("--json", json, "JSON output");

  auto* simulate = app.add_subcommand("simulate", "synthetic judge answers");
  simulate->add_option("--data", data, "dataset CSV")->required();
  simulate->add_option("--label-column", label_column, "label column");
  simulate->add_option("--judges", judges, "judge spec JSON")->required();
  simulate->add_option("--pairs", pairs, "pairs per judge");
  simulate->add_option("--seed", seed, "pair assignment seed");
  simulate->add_option("--out", out_path, "judgment log to write")->required();

  auto* serve = app.add_subcommand("serve", "run the judgment service");
  serve->add_option("--session", sessions, "session config JSON")->required();
  serve->add_option("--ui-dir", ui_dir, "static UI directory");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port (0 = any free port)");

  auto* report = app.add_subcommand("report", "recompute metrics of a report");
  report->add_option("--report", report_path, "report JSON")->required();
  report->add_option("--data", data, "dataset CSV")->required();
  report->add_option("--judgments", judgments, "judgment log (JSONL)");
  report->add_option("--label-column", label_column, "label column");
  report->add_option("--holdout", holdout, "held-out dataset CSV");

  std::vector<std::string> storage;
  storage.push_back("subjfair");
  storage.insert(storage.end(), args.begin(), args.end());
  auto argv = ArgvOf(storage);
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (train->parsed()) {
      return CmdTrain(data, judgments, out_path, manifest, num_judges,
                      train_flags, out, err);
    }
    if (sweep->parsed()) {
      return CmdSweep(data, judgments, out_path, session_dir, manifest,
                      num_judges, sweep_flags, out, err);
    }
    if (bounds->parsed()) {
      return CmdBounds(n, m, vc_dim, epsilon, delta, json, out);
    }
    if (simulate->parsed()) {
      return CmdSimulate(data, label_column, judges, pairs, seed, out_path,
                         out);
    }
    if (serve->parsed()) return CmdServe(sessions, ui_dir, host, port, out);
    if (report->parsed()) {
      return CmdReport(report_path, data, judgments, label_column, holdout,
                       out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace subjfair
