#ifndef SUBJFAIR_HYPOTHESIS_H_
#define SUBJFAIR_HYPOTHESIS_H_

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "subjfair/dataset.h"
#include "subjfair/kernels.h"

namespace subjfair {

// Predicts 1 exactly when weights . x + bias >= 0.
struct LinearThreshold {
  std::vector<double> weights;
  double bias = 0.0;
  friend bool operator==(const LinearThreshold&,
                         const LinearThreshold&) = default;
};

// A fixed labelling of the rows of one dataset.
struct TabularLabels {
  std::vector<std::uint8_t> predictions;
  friend bool operator==(const TabularLabels&, const TabularLabels&) = default;
};

class Hypothesis {
 public:
  using Variant = std::variant<LinearThreshold, TabularLabels>;

  static Hypothesis Linear(std::vector<double> weights, double bias);
  static Hypothesis Tabular(std::vector<std::uint8_t> predictions);
  // Tabular hypothesis of length n whose bits are those of `labelling`
  // (bit i is the prediction on row i). n <= 63.
  static Hypothesis FromLabellingIndex(std::uint64_t labelling, int n);

  const Variant& variant() const { return variant_; }
  const LinearThreshold* linear() const {
    return std::get_if<LinearThreshold>(&variant_);
  }
  const TabularLabels* tabular() const {
    return std::get_if<TabularLabels>(&variant_);
  }

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;

 private:
  explicit Hypothesis(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

// Prediction on a raw feature vector; tabular hypotheses have no meaning off
// their dataset and are rejected.
int Predict(const Hypothesis& h, std::span<const double> x);
// Prediction on row i of `dataset`; works for both variants.
int PredictAt(const Hypothesis& h, const Dataset& dataset, int i);
std::vector<std::uint8_t> PredictAll(const Hypothesis& h,
                                     const Dataset& dataset);

struct MixtureComponent {
  Hypothesis hypothesis;
  double weight = 0.0;
};

// A finite probability mixture over hypotheses.
class RandomizedClassifier {
 public:
  // Weights must be non-negative and sum to 1 within 1e-9.
  explicit RandomizedClassifier(std::vector<MixtureComponent> components);

  static RandomizedClassifier Deterministic(Hypothesis h);
  static RandomizedClassifier Uniform(std::vector<Hypothesis> hypotheses);

  const std::vector<MixtureComponent>& components() const {
    return components_;
  }
  int size() const { return static_cast<int>(components_.size()); }
  std::vector<double> weights() const;

 private:
  std::vector<MixtureComponent> components_;
};

kernels::PredictionTable PredictionTableOf(const RandomizedClassifier& d,
                                           const Dataset& dataset);

double PositiveRate(const RandomizedClassifier& d, std::span<const double> x);
double PositiveRateAt(const RandomizedClassifier& d, const Dataset& dataset,
                      int i);
// Positive rate on every row of the dataset.
std::vector<double> PositiveRates(const RandomizedClassifier& d,
                                  const Dataset& dataset);

// E_{h~D}[h(x) - h(x')].
double PairDisparity(const RandomizedClassifier& d, std::span<const double> x,
                     std::span<const double> x_prime);
double PairDisparityAt(const RandomizedClassifier& d, const Dataset& dataset,
                       int i, int j);

// Merges components that predict identically on every row of `dataset`,
// keeping the first representative and summing weights.
RandomizedClassifier Compact(const RandomizedClassifier& d,
                             const Dataset& dataset);

// Support size of the sparse uniform mixture that preserves every pairwise
// disparity on n points to eps: ceil(2 ln(2 n^2) / eps^2 + 1).
int SparsifySupportSize(int n, double eps);

struct SparsifyResult {
  RandomizedClassifier classifier;
  int support_size = 0;
  // Realised max over (i, j) in S x S of the disparity deviation.
  double deviation = 0.0;
  int attempts = 0;
};

// Draws SparsifySupportSize(n, eps) hypotheses i.i.d. from `d` and returns
// their uniform mixture, retrying with fresh draws until the realised
// deviation is at most eps. Throws Error once `max_retries` draws all fail.
SparsifyResult Sparsify(const RandomizedClassifier& d, const Dataset& dataset,
                        double eps, std::uint64_t seed, int max_retries = 100);

}  // namespace subjfair

#endif  // SUBJFAIR_HYPOTHESIS_H_
