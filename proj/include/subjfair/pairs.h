#ifndef SUBJFAIR_PAIRS_H_
#define SUBJFAIR_PAIRS_H_

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace subjfair {

struct OrderedPair {
  int i = 0;
  int j = 0;
  friend bool operator==(const OrderedPair&, const OrderedPair&) = default;
};

// An unordered pair stored canonically as (min, max).
struct UnorderedPair {
  int lo = 0;
  int hi = 0;
  static UnorderedPair Of(int i, int j);
  friend auto operator<=>(const UnorderedPair&, const UnorderedPair&) = default;
};

// The symmetric pair set A. Pairs are stored canonically and sorted; the
// symmetric closure is materialised on read so that ordered pair 2k is
// (lo, hi) and 2k + 1 is (hi, lo) of canonical pair k.
class PairSet {
 public:
  PairSet() = default;
  // Canonicalises and sorts. Rejects self-pairs and duplicate unordered pairs.
  explicit PairSet(std::vector<UnorderedPair> pairs);

  const std::vector<UnorderedPair>& canonical() const { return canonical_; }
  const std::vector<OrderedPair>& ordered() const { return ordered_; }

  // Number of unordered pairs; |A| is twice this.
  int num_unordered() const { return static_cast<int>(canonical_.size()); }
  int num_ordered() const { return static_cast<int>(ordered_.size()); }
  bool empty() const { return canonical_.empty(); }

  bool Contains(int i, int j) const { return IndexOf(i, j) >= 0; }
  // Canonical index of {i, j}, or -1.
  int IndexOf(int i, int j) const;
  // Largest index referenced, or -1 when empty.
  int MaxIndex() const;

 private:
  std::vector<UnorderedPair> canonical_;
  std::vector<OrderedPair> ordered_;
  std::unordered_map<std::uint64_t, int> index_;
};

// Draws m distinct unordered pairs from [n] uniformly without replacement and
// returns them in a seeded random presentation order.
std::vector<UnorderedPair> SamplePairSequence(int n, int m, std::uint64_t seed);

// Same draw as SamplePairSequence, as a PairSet (|pairs| = 2m ordered).
PairSet SamplePairs(int n, int m, std::uint64_t seed);

}  // namespace subjfair

#endif  // SUBJFAIR_PAIRS_H_
