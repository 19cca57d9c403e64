#include "perc/cft_formulas.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "perc/errors.hpp"
#include "perc/quadrature.hpp"
#include "perc/special_functions.hpp"

namespace perc {
namespace {

using std::numbers::pi;
using std::numbers::sqrt3;

constexpr double kThird = 1.0 / 3.0;

// Upper end of the numerical part of the Kleban integral; past it the
// integrand is e^(-pi r/3) (1 - 4 q + O(q^2)) with q < 1e-13.
constexpr double kKlebanCutoff = 5.0;

// Below this r the integrand needs many product factors; P(r) = 1 - P(1/r).
constexpr double kKlebanDualityBelow = 0.2;

constexpr double kMeanSeriesLowerEta = 0.01;
constexpr long kMeanSeriesTermCap = 50'000'000;

double cardy_prefactor() { return std::tgamma(2.0 * kThird) / (std::tgamma(4.0 * kThird) * std::tgamma(kThird)); }

double kleban_prefactor() {
  const double g = std::tgamma(kThird);
  return std::pow(2.0, 7.0 / 3.0) * pi * pi / (sqrt3 * g * g * g);
}

// Closed-form integral of e^(-pi r/3)(1 - 4 e^(-2 pi r)) over [from, inf).
double kleban_tail(double from) {
  const double lead = pi / 3.0;
  const double next = lead + 2.0 * pi;
  return std::exp(-lead * from) / lead - 4.0 * std::exp(-next * from) / next;
}

void check_unit_interval(const char* what, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << what << ": argument " << v << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

}  // namespace

UniversalConstants universal_constants() {
  return {sqrt3 / (8.0 * pi), sqrt3 / 4.0, cardy_prefactor(), kleban_prefactor()};
}

UniversalConstants universal_constants_recomputed() {
  UniversalConstants c{};
  // x'(1) = -1 / (4 Gamma(4/3) Gamma(-1/3)) and -sin(4 pi/3) / (4 pi).
  c.x_prime_1 = -1.0 / (4.0 * std::tgamma(4.0 * kThird) * std::tgamma(-kThird));
  c.strip_slope = 2.0 * pi * (-std::sin(4.0 * pi / 3.0) / (4.0 * pi));
  // Gamma(2/3)/(Gamma(4/3)Gamma(1/3)) = 3 / B(1/3,1/3) = 3 Gamma(2/3) / Gamma(1/3)^2.
  c.cardy_prefactor = 3.0 * std::exp(ln_gamma(2.0 * kThird) - 2.0 * ln_gamma(kThird));
  // Fixed by P(0) = 1.  eta(i/r)^4 = r^2 eta(ir)^4 folds the integral over
  // (0, 1) onto (1, inf), so the full integral is twice the latter.
  const double upper = integrate(dedekind_eta4, 1.0, kKlebanCutoff, 1e-16).value + kleban_tail(kKlebanCutoff);
  c.kleban_prefactor = 1.0 / (2.0 * upper);
  return c;
}

double crossing_probability(double eta) {
  check_unit_interval("crossing_probability", eta);
  if (eta == 0.0) return 0.0;
  if (eta == 1.0) return 1.0;
  if (eta > 0.5) return 1.0 - crossing_probability(1.0 - eta);
  const double hyper = gauss_2f1({kThird, 2.0 * kThird, 4.0 * kThird}, eta);
  return cardy_prefactor() * std::cbrt(eta) * hyper;
}

double mean_crossing_series(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    std::ostringstream msg;
    msg << "mean_crossing_number: eta = " << eta << " outside (0, 1)";
    throw DomainError(msg.str());
  }
  const double w = 1.0 - eta;
  // c_m = Gamma(1/3+m)Gamma(2/3) / (Gamma(2/3+m)Gamma(1/3)),  c_m = c_{m-1} (m-2/3)/(m-1/3).
  // The summand c_m w^m / m decreases in m, so the tail after term M is at most
  // term_M * w / (1 - w).
  double coefficient = 1.0;
  double power = 1.0;
  double sum = 0.0;
  double compensation = 0.0;
  for (long m = 1; m <= kMeanSeriesTermCap; ++m) {
    coefficient *= (m - 2.0 * kThird) / (m - kThird);
    power *= w;
    const double term = coefficient * power / static_cast<double>(m);
    // Kahan summation: up to ~1e7 terms near eta -> 0.
    const double y = term - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
    if (term * w / eta < 1e-15) {
      return 0.5 - sqrt3 / (4.0 * pi) * (std::log1p(-eta) + 2.0 * sum);
    }
  }
  throw NonConvergenceError("mean_crossing_number: series term cap reached", sum, sum);
}

MeanCrossing mean_crossing_number(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    std::ostringstream msg;
    msg << "mean_crossing_number: eta = " << eta << " outside (0, 1)";
    throw DomainError(msg.str());
  }
  if (eta < kMeanSeriesLowerEta) return {crossing_probability(eta), SeriesAccuracy::asymptotic};
  return {mean_crossing_series(eta), SeriesAccuracy::converged};
}

double kleban_crossing(double r) {
  if (!(r > 0.0) || std::isinf(r)) {
    std::ostringstream msg;
    msg << "kleban_crossing: aspect ratio r = " << r << " must be positive and finite";
    throw DomainError(msg.str());
  }
  if (r < kKlebanDualityBelow) return 1.0 - kleban_crossing(1.0 / r);
  double integral = 0.0;
  if (r < kKlebanCutoff) {
    integral = integrate(dedekind_eta4, r, kKlebanCutoff, 1e-16).value + kleban_tail(kKlebanCutoff);
  } else {
    integral = kleban_tail(r);
  }
  return kleban_prefactor() * integral;
}

double carleson_crossing(double x) {
  check_unit_interval("carleson_crossing", x);
  return x;
}

double carleson_consistency(double x) {
  check_unit_interval("carleson_consistency", x);
  return crossing_probability(triangle_eta(x));
}

double strip_mean_crossings(double ratio) {
  if (!(ratio >= 0.0)) {
    std::ostringstream msg;
    msg << "strip_mean_crossings: ratio " << ratio << " must be non-negative";
    throw DomainError(msg.str());
  }
  return sqrt3 / 4.0 * ratio;
}

double x_prime_one() { return sqrt3 / (8.0 * pi); }

}  // namespace perc
