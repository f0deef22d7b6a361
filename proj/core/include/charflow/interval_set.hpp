#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace charflow {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of sorted, pairwise disjoint closed intervals.
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Throws std::invalid_argument unless the intervals are sorted, disjoint
  /// and non-degenerate (lo <= hi).
  IntervalSet(std::vector<Interval> intervals, int level);

  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  int level() const { return level_; }

  /// Lebesgue measure of the set.
  double length() const;
  double max_interval_length() const;

  /// True iff x lies in one of the closed intervals. O(log n).
  bool contains(double x) const;

  /// Lebesgue measure of S ∩ [a, b]; zero when b <= a.
  double measure_within(double a, double b) const;

  /// True iff every interval of `other` lies inside some interval of this set.
  bool contains_set(const IntervalSet& other) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> intervals_;
  // prefix_[k] = total length of intervals_[0..k)
  std::vector<double> prefix_;
  int level_ = 0;
};

/// Level-L Smith–Volterra–Cantor approximant: starting from [0,1], stage n
/// removes an open middle interval of length 4^-n from each of the 2^(n-1)
/// current intervals. Length is 1 - (1 - 2^-L)/2; endpoints are dyadic so the
/// construction is exact in double precision.
IntervalSet fat_cantor_set(int level);

inline bool interval_membership(const IntervalSet& set, double x) {
  return set.contains(x);
}

}  // namespace charflow
