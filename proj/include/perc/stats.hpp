#pragma once

#include <cstdint>

namespace perc {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double low;
  double high;
};

/// Wilson score interval for a binomial proportion.  n = 0 gives [0, 1].
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = kZ95);

/// Running sums of a non-negative integer observable.  Integer accumulators
/// make merged results independent of the merge order.
struct CountMoments {
  std::uint64_t n = 0;
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;

  void add(std::uint64_t value) {
    ++n;
    sum += value;
    sum_sq += value * value;
  }
  void merge(const CountMoments& other) {
    n += other.n;
    sum += other.sum;
    sum_sq += other.sum_sq;
  }
  double mean() const;
  /// Standard error of the mean (sample variance with n-1).
  double standard_error() const;
};

}  // namespace perc
