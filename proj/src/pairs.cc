#include "subjfair/pairs.h"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_set>

#include "subjfair/error.h"

namespace subjfair {
namespace {

std::uint64_t Key(int lo, int hi) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lo)) << 32) |
         static_cast<std::uint32_t>(hi);
}

// Maps a linear index in [0, n(n-1)/2) onto the k-th pair of the row-major
// upper triangle.
UnorderedPair DecodeTriangle(std::int64_t k, int n) {
  int lo = 0;
  std::int64_t row = n - 1;
  while (k >= row) {
    k -= row;
    ++lo;
    --row;
  }
  return {lo, lo + 1 + static_cast<int>(k)};
}

}  // namespace

UnorderedPair UnorderedPair::Of(int i, int j) {
  return i < j ? UnorderedPair{i, j} : UnorderedPair{j, i};
}

PairSet::PairSet(std::vector<UnorderedPair> pairs) {
  for (auto& p : pairs) {
    if (p.lo == p.hi) {
      throw InvalidArgument("self-pair (" + std::to_string(p.lo) + ", " +
                            std::to_string(p.hi) + ") is not allowed");
    }
    if (p.lo < 0 || p.hi < 0) throw InvalidArgument("negative pair index");
    p = UnorderedPair::Of(p.lo, p.hi);
  }
  std::sort(pairs.begin(), pairs.end());
  if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end()) {
    throw InvalidArgument("duplicate unordered pair in pair set");
  }
  canonical_ = std::move(pairs);
  ordered_.reserve(canonical_.size() * 2);
  for (std::size_t k = 0; k < canonical_.size(); ++k) {
    const auto& p = canonical_[k];
    ordered_.push_back({p.lo, p.hi});
    ordered_.push_back({p.hi, p.lo});
    index_.emplace(Key(p.lo, p.hi), static_cast<int>(k));
  }
}

int PairSet::IndexOf(int i, int j) const {
  const auto p = UnorderedPair::Of(i, j);
  const auto it = index_.find(Key(p.lo, p.hi));
  return it == index_.end() ? -1 : it->second;
}

int PairSet::MaxIndex() const {
  int max_index = -1;
  for (const auto& p : canonical_) max_index = std::max(max_index, p.hi);
  return max_index;
}

std::vector<UnorderedPair> SamplePairSequence(int n, int m,
                                              std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("sample_pairs needs n >= 2");
  const std::int64_t total = static_cast<std::int64_t>(n) * (n - 1) / 2;
  if (m < 1 || m > total) {
    throw InvalidArgument("requested " + std::to_string(m) +
                          " pairs but only " + std::to_string(total) +
                          " distinct pairs exist");
  }
  std::mt19937_64 rng(seed);
  // Floyd's algorithm: m distinct draws from [0, total) in O(m).
  std::unordered_set<std::int64_t> chosen;
  std::vector<std::int64_t> picks;
  picks.reserve(m);
  for (std::int64_t r = total - m; r < total; ++r) {
    std::uniform_int_distribution<std::int64_t> draw(0, r);
    std::int64_t v = draw(rng);
    if (!chosen.insert(v).second) {
      v = r;
      chosen.insert(v);
    }
    picks.push_back(v);
  }
  std::shuffle(picks.begin(), picks.end(), rng);
  std::vector<UnorderedPair> out;
  out.reserve(m);
  for (auto k : picks) out.push_back(DecodeTriangle(k, n));
  return out;
}

PairSet SamplePairs(int n, int m, std::uint64_t seed) {
  return PairSet(SamplePairSequence(n, m, seed));
}

}  // namespace subjfair
