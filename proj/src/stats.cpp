#include "perc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "perc/errors.hpp"

namespace perc {

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (successes > n) throw InvalidInput("wilson_interval: more successes than trials");
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // Clamp so p_hat always sits inside the interval despite rounding at p = 0, 1.
  return {std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

double CountMoments::mean() const { return n == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(n); }

double CountMoments::standard_error() const {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  const double m = mean();
  const double var = std::max(0.0, (static_cast<double>(sum_sq) - nn * m * m) / (nn - 1.0));
  return std::sqrt(var / nn);
}

}  // namespace perc
