#include "charflow/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace charflow {

namespace {
// 2^24 intervals is already ~400 MB of endpoints.
constexpr int kMaxCantorLevel = 24;
}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> intervals, int level)
    : intervals_(std::move(intervals)), level_(level) {
  prefix_.reserve(intervals_.size() + 1);
  prefix_.push_back(0.0);
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    const Interval& iv = intervals_[k];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
      throw std::invalid_argument("IntervalSet: interval " + std::to_string(k) +
                                  " is not a finite closed interval");
    }
    if (k > 0 && !(intervals_[k - 1].hi < iv.lo)) {
      throw std::invalid_argument("IntervalSet: intervals " + std::to_string(k - 1) +
                                  " and " + std::to_string(k) +
                                  " are unsorted or overlapping");
    }
    prefix_.push_back(prefix_.back() + iv.length());
  }
}

double IntervalSet::length() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

double IntervalSet::max_interval_length() const {
  double best = 0.0;
  for (const Interval& iv : intervals_) best = std::max(best, iv.length());
  return best;
}

bool IntervalSet::contains(double x) const {
  // first interval whose lower end is > x; the candidate is the one before it
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  --it;
  return x <= it->hi;
}

double IntervalSet::measure_within(double a, double b) const {
  if (!(a < b) || intervals_.empty()) return 0.0;
  // Lebesgue measure of S ∩ (-inf, x]
  auto cumulative = [this](double x) {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return 0.0;
    const std::size_t k = static_cast<std::size_t>(it - intervals_.begin()) - 1;
    const Interval& iv = intervals_[k];
    return prefix_[k] + (std::min(x, iv.hi) - iv.lo);
  };
  return cumulative(b) - cumulative(a);
}

bool IntervalSet::contains_set(const IntervalSet& other) const {
  for (const Interval& iv : other.intervals_) {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), iv.lo,
                               [](double v, const Interval& x) { return v < x.lo; });
    if (it == intervals_.begin()) return false;
    --it;
    if (iv.hi > it->hi) return false;
  }
  return true;
}

IntervalSet fat_cantor_set(int level) {
  if (level < 0) throw std::invalid_argument("fat_cantor_set: level must be >= 0");
  if (level > kMaxCantorLevel) {
    throw std::invalid_argument("fat_cantor_set: level above " +
                                std::to_string(kMaxCantorLevel) + " is not supported");
  }
  std::vector<Interval> current{{0.0, 1.0}};
  for (int n = 1; n <= level; ++n) {
    const double half_gap = std::ldexp(1.0, -2 * n - 1);  // 4^-n / 2
    std::vector<Interval> next;
    next.reserve(current.size() * 2);
    for (const Interval& iv : current) {
      const double mid = 0.5 * (iv.lo + iv.hi);
      next.push_back({iv.lo, mid - half_gap});
      next.push_back({mid + half_gap, iv.hi});
    }
    current = std::move(next);
  }
  return IntervalSet(std::move(current), level);
}

}  // namespace charflow
