#ifndef SUBJFAIR_JUDGMENTS_H_
#define SUBJFAIR_JUDGMENTS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "subjfair/dataset.h"
#include "subjfair/pairs.h"

namespace subjfair {

// One judge's answer to "should these two individuals be treated the same?".
struct JudgeResponse {
  std::string judge_id;
  int i = 0;
  int j = 0;
  bool same = false;
  friend bool operator==(const JudgeResponse&, const JudgeResponse&) = default;
};

// Aggregated judge weights over a pair set: the weight of a pair is the
// fraction of judges who answered "same" for it. Only "same" answers create
// weight. Weights are kept as integer counts, so they sit exactly on the
// grid {0, 1/U, ..., 1}.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(PairSet pair_set, std::vector<int> same_counts,
                int num_judges);

  const PairSet& pair_set() const { return pair_set_; }
  int num_judges() const { return num_judges_; }
  const std::vector<int>& same_counts() const { return same_counts_; }

  // Weight of canonical pair k.
  double weight(int k) const {
    return static_cast<double>(same_counts_[k]) / num_judges_;
  }
  // Weight of (i, j) in either order; 0 outside the pair set.
  double Weight(int i, int j) const;
  // Weight of every ordered pair of the symmetric closure, in
  // pair_set().ordered() order.
  std::vector<double> OrderedWeights() const;
  // Unordered pairs with positive weight.
  int num_constrained() const;

 private:
  PairSet pair_set_;
  std::vector<int> same_counts_;
  int num_judges_ = 1;
};

ConstraintSet BuildConstraints(const std::vector<JudgeResponse>& responses,
                               const PairSet& pair_set, int num_judges);

// Builds constraints from a judgment log alone: the pair set is every pair
// that received a response and num_judges defaults to the number of distinct
// judge ids (at least 1).
ConstraintSet BuildConstraintsFromLog(
    const std::vector<JudgeResponse>& responses,
    std::optional<int> num_judges = std::nullopt);

// Judgment files hold one JSON object per line: judge_id, i, j, same.
std::string FormatJudgmentLine(const JudgeResponse& response);
JudgeResponse ParseJudgmentLine(const std::string& line);
std::vector<JudgeResponse> ReadJudgments(const std::filesystem::path& path);
void WriteJudgments(const std::filesystem::path& path,
                    const std::vector<JudgeResponse>& responses);

// ConstraintSet files: {"num_judges": U, "pairs": [{"i", "j", "weight"}]}
// with one entry per canonical pair.
std::string ConstraintSetToJson(const ConstraintSet& constraints);
ConstraintSet ConstraintSetFromJson(const std::string& text);
void SaveConstraintSet(const ConstraintSet& constraints,
                       const std::filesystem::path& path);
ConstraintSet LoadConstraintSet(const std::filesystem::path& path);

enum class JudgeKind { kMetricThreshold, kFeatureSubset, kRandomFlip };

// A synthetic stand-in for a human judge.
//
//  metric-threshold: same iff sum_f w_f |x_f - x'_f| <= threshold.
//  feature-subset:   same iff |x_f - x'_f| <= threshold for every feature f
//                    with w_f != 0.
//  random-flip:      starts from "different" everywhere.
//
// Each answer is then flipped independently with flip_probability.
struct SyntheticJudgeSpec {
  std::string judge_id = "synthetic";
  JudgeKind kind = JudgeKind::kMetricThreshold;
  std::vector<double> feature_weights;
  double threshold = 0.0;
  double flip_probability = 0.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

std::string JudgeKindName(JudgeKind kind);
JudgeKind ParseJudgeKind(const std::string& name);

// Reads either a single judge object or {"judges": [...]} / a bare array.
std::vector<SyntheticJudgeSpec> LoadJudgeSpecs(
    const std::filesystem::path& path);

// Answers every unordered pair of `pair_set` once, in canonical order, with
// i < j in each response.
std::vector<JudgeResponse> SimulateJudge(const Dataset& dataset,
                                         const PairSet& pair_set,
                                         const SyntheticJudgeSpec& spec);

// Weighted l1 distance used by the metric-threshold judge.
double WeightedL1(const Dataset& dataset, int i, int j,
                  const std::vector<double>& weights);

}  // namespace subjfair

#endif  // SUBJFAIR_JUDGMENTS_H_
