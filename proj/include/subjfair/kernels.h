#ifndef SUBJFAIR_KERNELS_H_
#define SUBJFAIR_KERNELS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "subjfair/pairs.h"

// Data-parallel evaluation kernels. Each kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::parallel with the same
// signature. Both variants perform the same per-element arithmetic in the
// same order, so their outputs are bit-identical; only the distribution of
// elements over threads differs. Reductions are max/min only.
namespace subjfair::kernels {

// Row-major 0/1 predictions: one row per mixture component, one column per
// data point.
struct PredictionTable {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;

  std::span<const std::uint8_t> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols,
            static_cast<std::size_t>(cols)};
  }
};

namespace serial {

// out[i] = sum_r weights[r] * table(r, i), summed in component order.
void PositiveRates(const PredictionTable& table,
                   std::span<const double> weights, std::span<double> out);

// out[k] = rates[i_k] - rates[j_k].
void PairDisparities(std::span<const double> rates,
                     std::span<const OrderedPair> pairs, std::span<double> out);

// out[k] = w_k * max(0, |rates[i_k] - rates[j_k]| - gamma).
void FairnessLosses(std::span<const double> rates,
                    std::span<const OrderedPair> pairs,
                    std::span<const double> weights, double gamma,
                    std::span<double> out);

// max over all (i, j) in [n]^2 of |(a_i - a_j) - (b_i - b_j)|, by scanning
// every ordered pair.
double MaxPairDeviation(std::span<const double> a, std::span<const double> b);

}  // namespace serial

namespace parallel {

void PositiveRates(const PredictionTable& table,
                   std::span<const double> weights, std::span<double> out);
void PairDisparities(std::span<const double> rates,
                     std::span<const OrderedPair> pairs, std::span<double> out);
void FairnessLosses(std::span<const double> rates,
                    std::span<const OrderedPair> pairs,
                    std::span<const double> weights, double gamma,
                    std::span<double> out);
double MaxPairDeviation(std::span<const double> a, std::span<const double> b);

}  // namespace parallel

// Problem sizes below this many elements run the serial variant; the thread
// start-up cost dominates otherwise.
inline constexpr std::size_t kParallelThreshold = 1 << 14;

void PositiveRates(const PredictionTable& table,
                   std::span<const double> weights, std::span<double> out);
void PairDisparities(std::span<const double> rates,
                     std::span<const OrderedPair> pairs, std::span<double> out);
void FairnessLosses(std::span<const double> rates,
                    std::span<const OrderedPair> pairs,
                    std::span<const double> weights, double gamma,
                    std::span<double> out);

}  // namespace subjfair::kernels

#endif  // SUBJFAIR_KERNELS_H_
