#include "subjfair/judgments.h"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "subjfair/error.h"

namespace subjfair {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << text;
}

SyntheticJudgeSpec JudgeSpecFromJson(const nlohmann::json& j) {
  SyntheticJudgeSpec spec;
  spec.judge_id = j.value("judge_id", std::string("synthetic"));
  spec.kind = ParseJudgeKind(j.value("kind", std::string("metric-threshold")));
  spec.feature_weights =
      j.value("feature_weights", std::vector<double>{});
  spec.threshold = j.value("threshold", 0.0);
  spec.flip_probability = j.value("flip_probability", 0.0);
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.Validate();
  return spec;
}

}  // namespace

ConstraintSet::ConstraintSet(PairSet pair_set, std::vector<int> same_counts,
                             int num_judges)
    : pair_set_(std::move(pair_set)),
      same_counts_(std::move(same_counts)),
      num_judges_(num_judges) {
  if (num_judges_ < 1) throw InvalidArgument("num_judges must be positive");
  if (same_counts_.size() != pair_set_.canonical().size()) {
    throw InvalidArgument("one same-count per canonical pair is required");
  }
  for (int c : same_counts_) {
    if (c < 0 || c > num_judges_) {
      throw InvalidArgument("same-count outside [0, num_judges]");
    }
  }
}

double ConstraintSet::Weight(int i, int j) const {
  const int k = pair_set_.IndexOf(i, j);
  return k < 0 ? 0.0 : weight(k);
}

std::vector<double> ConstraintSet::OrderedWeights() const {
  std::vector<double> out;
  out.reserve(pair_set_.num_ordered());
  for (int k = 0; k < pair_set_.num_unordered(); ++k) {
    out.push_back(weight(k));
    out.push_back(weight(k));
  }
  return out;
}

int ConstraintSet::num_constrained() const {
  int count = 0;
  for (int c : same_counts_) count += c > 0;
  return count;
}

ConstraintSet BuildConstraints(const std::vector<JudgeResponse>& responses,
                               const PairSet& pair_set, int num_judges) {
  if (num_judges < 1) throw InvalidArgument("num_judges must be positive");
  std::vector<int> counts(pair_set.num_unordered(), 0);
  std::set<std::pair<std::string, int>> seen;
  std::set<std::string> judges;
  for (const auto& r : responses) {
    if (r.i == r.j) throw InvalidArgument("response on a self-pair");
    const int k = pair_set.IndexOf(r.i, r.j);
    if (k < 0) {
      throw InvalidArgument("response for pair (" + std::to_string(r.i) +
                            ", " + std::to_string(r.j) +
                            ") outside the pair set");
    }
    if (!seen.emplace(r.judge_id, k).second) {
      throw Conflict("duplicate response from judge '" + r.judge_id +
                     "' for pair (" + std::to_string(r.i) + ", " +
                     std::to_string(r.j) + ")");
    }
    judges.insert(r.judge_id);
    if (r.same) ++counts[k];
  }
  if (static_cast<int>(judges.size()) > num_judges) {
    throw InvalidArgument(std::to_string(judges.size()) +
                          " distinct judges exceed num_judges = " +
                          std::to_string(num_judges));
  }
  return ConstraintSet(pair_set, std::move(counts), num_judges);
}

ConstraintSet BuildConstraintsFromLog(
    const std::vector<JudgeResponse>& responses,
    std::optional<int> num_judges) {
  std::set<UnorderedPair> pairs;
  std::set<std::string> judges;
  for (const auto& r : responses) {
    if (r.i == r.j) throw InvalidArgument("response on a self-pair");
    pairs.insert(UnorderedPair::Of(r.i, r.j));
    judges.insert(r.judge_id);
  }
  const int judge_count =
      num_judges.value_or(std::max<int>(1, static_cast<int>(judges.size())));
  return BuildConstraints(
      responses, PairSet(std::vector<UnorderedPair>(pairs.begin(), pairs.end())),
      judge_count);
}

std::string FormatJudgmentLine(const JudgeResponse& response) {
  ordered_json j;
  j["judge_id"] = response.judge_id;
  j["i"] = response.i;
  j["j"] = response.j;
  j["same"] = response.same;
  return j.dump();
}

JudgeResponse ParseJudgmentLine(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed judgment JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("judge_id") || !j.contains("i") ||
      !j.contains("j") || !j.contains("same") || !j["judge_id"].is_string() ||
      !j["i"].is_number_integer() || !j["j"].is_number_integer() ||
      !j["same"].is_boolean()) {
    throw InvalidArgument(
        "judgment must be an object with string judge_id, integer i and j, "
        "boolean same");
  }
  JudgeResponse r;
  r.judge_id = j["judge_id"].get<std::string>();
  r.i = j["i"].get<int>();
  r.j = j["j"].get<int>();
  r.same = j["same"].get<bool>();
  if (r.judge_id.empty()) throw InvalidArgument("judge_id must be non-empty");
  if (r.i < 0 || r.j < 0) throw InvalidArgument("negative record index");
  if (r.i == r.j) throw InvalidArgument("judgment on a self-pair");
  return r;
}

std::vector<JudgeResponse> ReadJudgments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open judgments file: " + path.string());
  std::vector<JudgeResponse> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      out.push_back(ParseJudgmentLine(line));
    } catch (const Error& e) {
      throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                            ": " + e.what());
    }
  }
  return out;
}

void WriteJudgments(const std::filesystem::path& path,
                    const std::vector<JudgeResponse>& responses) {
  std::string text;
  for (const auto& r : responses) text += FormatJudgmentLine(r) + "\n";
  WriteFile(path, text);
}

std::string ConstraintSetToJson(const ConstraintSet& constraints) {
  ordered_json j;
  j["num_judges"] = constraints.num_judges();
  j["pairs"] = ordered_json::array();
  const auto& canonical = constraints.pair_set().canonical();
  for (std::size_t k = 0; k < canonical.size(); ++k) {
    ordered_json p;
    p["i"] = canonical[k].lo;
    p["j"] = canonical[k].hi;
    p["weight"] = constraints.weight(static_cast<int>(k));
    j["pairs"].push_back(std::move(p));
  }
  return j.dump(2) + "\n";
}

ConstraintSet ConstraintSetFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed constraint set: ") + e.what());
  }
  int num_judges = 0;
  std::vector<std::pair<UnorderedPair, double>> entries;
  try {
    num_judges = j.at("num_judges").get<int>();
    for (const auto& p : j.at("pairs")) {
      entries.emplace_back(
          UnorderedPair::Of(p.at("i").get<int>(), p.at("j").get<int>()),
          p.at("weight").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed constraint set: ") + e.what());
  }
  if (num_judges < 1) throw InvalidArgument("num_judges must be positive");
  std::vector<UnorderedPair> pairs;
  std::map<UnorderedPair, int> counts;
  for (const auto& [pair, w] : entries) {
    const double scaled = w * num_judges;
    const double rounded = std::round(scaled);
    if (w < 0 || w > 1 || std::abs(scaled - rounded) > 1e-9) {
      throw InvalidArgument("weight " + std::to_string(w) +
                            " is not a multiple of 1/num_judges in [0, 1]");
    }
    pairs.push_back(pair);
    counts[pair] = static_cast<int>(rounded);
  }
  PairSet pair_set(pairs);
  std::vector<int> same_counts;
  for (const auto& p : pair_set.canonical()) same_counts.push_back(counts[p]);
  return ConstraintSet(std::move(pair_set), std::move(same_counts), num_judges);
}

void SaveConstraintSet(const ConstraintSet& constraints,
                       const std::filesystem::path& path) {
  WriteFile(path, ConstraintSetToJson(constraints));
}

ConstraintSet LoadConstraintSet(const std::filesystem::path& path) {
  return ConstraintSetFromJson(ReadFile(path));
}

void SyntheticJudgeSpec::Validate() const {
  if (!(threshold >= 0)) throw InvalidArgument("judge threshold must be >= 0");
  if (!(flip_probability >= 0 && flip_probability <= 1)) {
    throw InvalidArgument("flip probability must lie in [0, 1]");
  }
}

std::string JudgeKindName(JudgeKind kind) {
  switch (kind) {
    case JudgeKind::kMetricThreshold:
      return "metric-threshold";
    case JudgeKind::kFeatureSubset:
      return "feature-subset";
    case JudgeKind::kRandomFlip:
      return "random-flip";
  }
  return "unknown";
}

JudgeKind ParseJudgeKind(const std::string& name) {
  if (name == "metric-threshold") return JudgeKind::kMetricThreshold;
  if (name == "feature-subset") return JudgeKind::kFeatureSubset;
  if (name == "random-flip") return JudgeKind::kRandomFlip;
  throw InvalidArgument("unknown judge kind '" + name + "'");
}

std::vector<SyntheticJudgeSpec> LoadJudgeSpecs(
    const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  std::vector<SyntheticJudgeSpec> specs;
  try {
    const auto& list = j.is_object() && j.contains("judges") ? j["judges"] : j;
    if (list.is_array()) {
      for (const auto& item : list) specs.push_back(JudgeSpecFromJson(item));
    } else {
      specs.push_back(JudgeSpecFromJson(list));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  if (specs.empty()) throw InvalidArgument(path.string() + ": no judges");
  return specs;
}

double WeightedL1(const Dataset& dataset, int i, int j,
                  const std::vector<double>& weights) {
  const auto a = dataset.row(i);
  const auto b = dataset.row(j);
  double total = 0;
  for (std::size_t f = 0; f < a.size(); ++f) {
    total += weights[f] * std::abs(a[f] - b[f]);
  }
  return total;
}

std::vector<JudgeResponse> SimulateJudge(const Dataset& dataset,
                                         const PairSet& pair_set,
                                         const SyntheticJudgeSpec& spec) {
  spec.Validate();
  if (spec.kind != JudgeKind::kRandomFlip &&
      spec.feature_weights.size() != static_cast<std::size_t>(dataset.dim())) {
    throw InvalidArgument("feature_weights has length " +
                          std::to_string(spec.feature_weights.size()) +
                          ", dataset has d = " +
                          std::to_string(dataset.dim()));
  }
  if (pair_set.MaxIndex() >= dataset.size()) {
    throw InvalidArgument("pair set references rows beyond the dataset");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<JudgeResponse> out;
  out.reserve(pair_set.num_unordered());
  for (const auto& p : pair_set.canonical()) {
    bool same = false;
    switch (spec.kind) {
      case JudgeKind::kMetricThreshold:
        same = WeightedL1(dataset, p.lo, p.hi, spec.feature_weights) <=
               spec.threshold;
        break;
      case JudgeKind::kFeatureSubset: {
        same = true;
        const auto a = dataset.row(p.lo);
        const auto b = dataset.row(p.hi);
        for (std::size_t f = 0; f < a.size(); ++f) {
          if (spec.feature_weights[f] != 0 &&
              std::abs(a[f] - b[f]) > spec.threshold) {
            same = false;
          }
        }
        break;
      }
      case JudgeKind::kRandomFlip:
        break;
    }
    if (unit(rng) < spec.flip_probability) same = !same;
    out.push_back({spec.judge_id, p.lo, p.hi, same});
  }
  return out;
}

}  // namespace subjfair
