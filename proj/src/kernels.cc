#include "subjfair/kernels.h"

#include <algorithm>
#include <cmath>

#include "subjfair/error.h"

namespace subjfair::kernels {
namespace {

void CheckRates(const PredictionTable& table, std::span<const double> weights,
                std::span<double> out) {
  if (weights.size() != static_cast<std::size_t>(table.rows) ||
      out.size() != static_cast<std::size_t>(table.cols) ||
      table.data.size() != static_cast<std::size_t>(table.rows) * table.cols) {
    throw InvalidArgument("prediction table shape mismatch");
  }
}

inline double RateAt(const PredictionTable& table,
                     std::span<const double> weights, int i) {
  double rate = 0;
  for (int r = 0; r < table.rows; ++r) {
    if (table.data[static_cast<std::size_t>(r) * table.cols + i]) {
      rate += weights[r];
    }
  }
  return rate;
}

inline double LossAt(std::span<const double> rates, const OrderedPair& p,
                     double weight, double gamma) {
  return weight * std::max(0.0, std::abs(rates[p.i] - rates[p.j]) - gamma);
}

}  // namespace

namespace serial {

void PositiveRates(const PredictionTable& table,
                   std::span<const double> weights, std::span<double> out) {
  CheckRates(table, weights, out);
  for (int i = 0; i < table.cols; ++i) out[i] = RateAt(table, weights, i);
}

void PairDisparities(std::span<const double> rates,
                     std::span<const OrderedPair> pairs,
                     std::span<double> out) {
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out[k] = rates[pairs[k].i] - rates[pairs[k].j];
  }
}

void FairnessLosses(std::span<const double> rates,
                    std::span<const OrderedPair> pairs,
                    std::span<const double> weights, double gamma,
                    std::span<double> out) {
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out[k] = LossAt(rates, pairs[k], weights[k], gamma);
  }
}

double MaxPairDeviation(std::span<const double> a, std::span<const double> b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      worst = std::max(worst, std::abs((a[i] - a[j]) - (b[i] - b[j])));
    }
  }
  return worst;
}

}  // namespace serial

namespace parallel {

void PositiveRates(const PredictionTable& table,
                   std::span<const double> weights, std::span<double> out) {
  CheckRates(table, weights, out);
  const int n = table.cols;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[i] = RateAt(table, weights, i);
}

void PairDisparities(std::span<const double> rates,
                     std::span<const OrderedPair> pairs,
                     std::span<double> out) {
  const auto m = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    out[k] = rates[pairs[k].i] - rates[pairs[k].j];
  }
}

void FairnessLosses(std::span<const double> rates,
                    std::span<const OrderedPair> pairs,
                    std::span<const double> weights, double gamma,
                    std::span<double> out) {
  const auto m = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    out[k] = LossAt(rates, pairs[k], weights[k], gamma);
  }
}

double MaxPairDeviation(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  double worst = 0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs((a[i] - a[j]) - (b[i] - b[j])));
    }
  }
  return worst;
}

}  // namespace parallel

void PositiveRates(const PredictionTable& table,
                   std::span<const double> weights, std::span<double> out) {
  if (table.data.size() >= kParallelThreshold) {
    parallel::PositiveRates(table, weights, out);
  } else {
    serial::PositiveRates(table, weights, out);
  }
}

void PairDisparities(std::span<const double> rates,
                     std::span<const OrderedPair> pairs,
                     std::span<double> out) {
  if (pairs.size() >= kParallelThreshold) {
    parallel::PairDisparities(rates, pairs, out);
  } else {
    serial::PairDisparities(rates, pairs, out);
  }
}

void FairnessLosses(std::span<const double> rates,
                    std::span<const OrderedPair> pairs,
                    std::span<const double> weights, double gamma,
                    std::span<double> out) {
  if (pairs.size() >= kParallelThreshold) {
    parallel::FairnessLosses(rates, pairs, weights, gamma, out);
  } else {
    serial::FairnessLosses(rates, pairs, weights, gamma, out);
  }
}

}  // namespace subjfair::kernels
