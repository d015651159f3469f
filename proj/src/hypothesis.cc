#include "subjfair/hypothesis.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_map>

#include "subjfair/error.h"

namespace subjfair {

Hypothesis Hypothesis::Linear(std::vector<double> weights, double bias) {
  for (double w : weights) {
    if (!std::isfinite(w)) throw InvalidArgument("non-finite linear weight");
  }
  if (!std::isfinite(bias)) throw InvalidArgument("non-finite linear bias");
  return Hypothesis(LinearThreshold{std::move(weights), bias});
}

Hypothesis Hypothesis::Tabular(std::vector<std::uint8_t> predictions) {
  for (auto p : predictions) {
    if (p > 1) throw InvalidArgument("tabular predictions must be 0 or 1");
  }
  return Hypothesis(TabularLabels{std::move(predictions)});
}

Hypothesis Hypothesis::FromLabellingIndex(std::uint64_t labelling, int n) {
  if (n < 0 || n > 63) throw InvalidArgument("labelling index needs n <= 63");
  std::vector<std::uint8_t> predictions(n);
  for (int i = 0; i < n; ++i) predictions[i] = (labelling >> i) & 1u;
  return Tabular(std::move(predictions));
}

int Predict(const Hypothesis& h, std::span<const double> x) {
  const auto* lin = h.linear();
  if (lin == nullptr) {
    throw InvalidArgument(
        "tabular hypotheses predict only on rows of their dataset");
  }
  if (lin->weights.size() != x.size()) {
    throw InvalidArgument("dimension mismatch: hypothesis expects d = " +
                          std::to_string(lin->weights.size()) + ", got " +
                          std::to_string(x.size()));
  }
  double score = lin->bias;
  for (std::size_t f = 0; f < x.size(); ++f) score += lin->weights[f] * x[f];
  return score >= 0 ? 1 : 0;
}

int PredictAt(const Hypothesis& h, const Dataset& dataset, int i) {
  if (i < 0 || i >= dataset.size()) {
    throw InvalidArgument("row index " + std::to_string(i) + " out of range");
  }
  if (const auto* tab = h.tabular()) {
    if (tab->predictions.size() != static_cast<std::size_t>(dataset.size())) {
      throw InvalidArgument("tabular hypothesis length differs from n");
    }
    return tab->predictions[i];
  }
  return Predict(h, dataset.row(i));
}

std::vector<std::uint8_t> PredictAll(const Hypothesis& h,
                                     const Dataset& dataset) {
  if (const auto* tab = h.tabular()) {
    if (tab->predictions.size() != static_cast<std::size_t>(dataset.size())) {
      throw InvalidArgument("tabular hypothesis length differs from n");
    }
    return tab->predictions;
  }
  std::vector<std::uint8_t> out(dataset.size());
  for (int i = 0; i < dataset.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(Predict(h, dataset.row(i)));
  }
  return out;
}

RandomizedClassifier::RandomizedClassifier(
    std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw InvalidArgument("randomized classifier needs a component");
  }
  double total = 0;
  for (const auto& c : components_) {
    if (!(c.weight >= 0) || !std::isfinite(c.weight)) {
      throw InvalidArgument("mixture weights must be finite and >= 0");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("mixture weights sum to " + std::to_string(total) +
                          ", expected 1");
  }
}

RandomizedClassifier RandomizedClassifier::Deterministic(Hypothesis h) {
  return RandomizedClassifier({{std::move(h), 1.0}});
}

RandomizedClassifier RandomizedClassifier::Uniform(
    std::vector<Hypothesis> hypotheses) {
  const double w = 1.0 / static_cast<double>(hypotheses.size());
  std::vector<MixtureComponent> components;
  components.reserve(hypotheses.size());
  for (auto& h : hypotheses) components.push_back({std::move(h), w});
  return RandomizedClassifier(std::move(components));
}

std::vector<double> RandomizedClassifier::weights() const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.weight);
  return out;
}

kernels::PredictionTable PredictionTableOf(const RandomizedClassifier& d,
                                           const Dataset& dataset) {
  kernels::PredictionTable table;
  table.rows = d.size();
  table.cols = dataset.size();
  table.data.reserve(static_cast<std::size_t>(table.rows) * table.cols);
  for (const auto& c : d.components()) {
    const auto row = PredictAll(c.hypothesis, dataset);
    table.data.insert(table.data.end(), row.begin(), row.end());
  }
  return table;
}

double PositiveRate(const RandomizedClassifier& d, std::span<const double> x) {
  double rate = 0;
  for (const auto& c : d.components()) {
    if (Predict(c.hypothesis, x)) rate += c.weight;
  }
  return rate;
}

double PositiveRateAt(const RandomizedClassifier& d, const Dataset& dataset,
                      int i) {
  double rate = 0;
  for (const auto& c : d.components()) {
    if (PredictAt(c.hypothesis, dataset, i)) rate += c.weight;
  }
  return rate;
}

std::vector<double> PositiveRates(const RandomizedClassifier& d,
                                  const Dataset& dataset) {
  const auto table = PredictionTableOf(d, dataset);
  const auto w = d.weights();
  std::vector<double> rates(dataset.size());
  kernels::PositiveRates(table, w, rates);
  return rates;
}

double PairDisparity(const RandomizedClassifier& d, std::span<const double> x,
                     std::span<const double> x_prime) {
  return PositiveRate(d, x) - PositiveRate(d, x_prime);
}

double PairDisparityAt(const RandomizedClassifier& d, const Dataset& dataset,
                       int i, int j) {
  return PositiveRateAt(d, dataset, i) - PositiveRateAt(d, dataset, j);
}

RandomizedClassifier Compact(const RandomizedClassifier& d,
                             const Dataset& dataset) {
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<MixtureComponent> merged;
  for (const auto& c : d.components()) {
    const auto p = PredictAll(c.hypothesis, dataset);
    std::string key(p.begin(), p.end());
    const auto [it, inserted] = slot.emplace(std::move(key), merged.size());
    if (inserted) {
      merged.push_back(c);
    } else {
      merged[it->second].weight += c.weight;
    }
  }
  return RandomizedClassifier(std::move(merged));
}

int SparsifySupportSize(int n, double eps) {
  if (n < 1) throw InvalidArgument("sparsify needs n >= 1");
  if (!(eps > 0)) throw InvalidArgument("sparsify needs eps > 0");
  const double nn = static_cast<double>(n);
  return static_cast<int>(
      std::ceil(2.0 * std::log(2.0 * nn * nn) / (eps * eps) + 1.0));
}

SparsifyResult Sparsify(const RandomizedClassifier& d, const Dataset& dataset,
                        double eps, std::uint64_t seed, int max_retries) {
  const int k = SparsifySupportSize(dataset.size(), eps);
  if (max_retries < 1) throw InvalidArgument("max_retries must be >= 1");
  const auto table = PredictionTableOf(d, dataset);
  const auto weights = d.weights();
  std::vector<double> target(dataset.size());
  kernels::PositiveRates(table, weights, target);

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> draw(weights.begin(), weights.end());
  std::vector<double> sampled(dataset.size());
  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    std::vector<int> counts(d.size(), 0);
    std::vector<int> picks(k);
    for (int s = 0; s < k; ++s) {
      picks[s] = draw(rng);
      ++counts[picks[s]];
    }
    std::fill(sampled.begin(), sampled.end(), 0.0);
    for (int r = 0; r < d.size(); ++r) {
      if (counts[r] == 0) continue;
      const auto row = table.row(r);
      for (int i = 0; i < dataset.size(); ++i) {
        if (row[i]) sampled[i] += counts[r];
      }
    }
    // max over (i, j) of |delta_i - delta_j| is max(delta) - min(delta).
    double hi = -2, lo = 2;
    for (int i = 0; i < dataset.size(); ++i) {
      const double delta = target[i] - sampled[i] / k;
      hi = std::max(hi, delta);
      lo = std::min(lo, delta);
    }
    const double deviation = hi - lo;
    if (deviation <= eps) {
      std::vector<Hypothesis> chosen;
      chosen.reserve(k);
      for (int s = 0; s < k; ++s) {
        chosen.push_back(d.components()[picks[s]].hypothesis);
      }
      return {RandomizedClassifier::Uniform(std::move(chosen)), k, deviation,
              attempt};
    }
  }
  throw Error("sparsify: no " + std::to_string(k) +
              "-support mixture within eps = " + std::to_string(eps) +
              " after " + std::to_string(max_retries) + " attempts");
}

}  // namespace subjfair
