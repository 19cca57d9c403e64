#pragma once

// Closed-form predictions for critical percolation crossings.

#include "perc/conformal_geometry.hpp"

namespace perc {

struct UniversalConstants {
  double x_prime_1;          // sqrt(3) / (8 pi)
  double strip_slope;        // sqrt(3) / 4 = 2 pi x'(1)
  double cardy_prefactor;    // Gamma(2/3) / (Gamma(4/3) Gamma(1/3))
  double kleban_prefactor;   // 2^(7/3) pi^2 / (sqrt(3) Gamma(1/3)^3)
};

/// Constants in their closed forms.
UniversalConstants universal_constants();

/// The same constants recomputed through an independent Gamma-function route
/// (reflection formula, P(0) = 1 normalisation).
UniversalConstants universal_constants_recomputed();

/// Crossing probability for cross-ratio eta in [0, 1]:
///   P = Gamma(2/3)/(Gamma(4/3)Gamma(1/3)) eta^(1/3) 2F1(1/3, 2/3; 4/3; eta).
/// eta > 1/2 is evaluated as 1 - P(1 - eta).
double crossing_probability(double eta);
inline double crossing_probability(CrossRatio eta) { return crossing_probability(eta.eta); }

enum class SeriesAccuracy { converged, asymptotic };

struct MeanCrossing {
  double value;
  SeriesAccuracy accuracy;
};

/// Mean number of distinct crossing clusters E[N_c](eta), eta in (0, 1).
/// For eta in [0.01, 1) the series is summed to 1e-8 absolute; below 0.01 the
/// small-eta asymptote E[N_c] ~ P(eta) is returned and flagged.
MeanCrossing mean_crossing_number(double eta);

/// The series form of E[N_c] summed at any eta in (0, 1), with a
/// geometric tail bound.  Slow for small eta, but never approximated.
double mean_crossing_series(double eta);

/// Rectangle crossing probability from the integral of eta(i r')^4 over [r, inf).
double kleban_crossing(double r);

/// Crossing probability from AB to the segment XC (length x) in a unit
/// equilateral triangle: exactly x.
double carleson_crossing(double x);

/// crossing_probability(triangle_eta(x)); should reproduce x.
double carleson_consistency(double x);

/// Long periodic strip law E[N_c] ~ (sqrt(3)/4) (W/L).
double strip_mean_crossings(double ratio);

/// x'(1) = sqrt(3) / (8 pi).
double x_prime_one();

}  // namespace perc
