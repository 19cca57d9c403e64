#pragma once

#include <functional>

namespace perc {

struct QuadratureResult {
  double value;
  double error_estimate;
  int intervals;
};

/// Adaptive Gauss-Kronrod (7/15) on a finite interval.  Subdivides until the
/// summed Kronrod-Gauss difference is below abs_tol, or max_intervals is hit.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           double abs_tol = 1e-14, int max_intervals = 2000);

}  // namespace perc
