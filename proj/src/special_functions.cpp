#include "perc/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "perc/errors.hpp"
#include "perc/quadrature.hpp"

namespace perc {
namespace {

constexpr int kSeriesTermCap = 200000;

bool is_non_positive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

bool near_integer(double x) { return std::abs(x - std::nearbyint(x)) < 1e-9; }

// 1/Gamma(x), zero at the poles.
double reciprocal_gamma(double x) {
  if (is_non_positive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

void check_params(const HypergeometricParams& p) {
  if (is_non_positive_integer(p.c)) {
    std::ostringstream msg;
    msg << "gauss_2f1: c = " << p.c << " is zero or a negative integer";
    throw DomainError(msg.str());
  }
}

void check_argument(double z) {
  if (!(z >= 0.0 && z < 1.0)) {
    std::ostringstream msg;
    msg << "gauss_2f1: argument z = " << z << " outside [0, 1)";
    throw DomainError(msg.str());
  }
}

double raw_series(double a, double b, double c, double z) {
  double sum = 1.0;
  double term = 1.0;
  for (int n = 0; n < kSeriesTermCap; ++n) {
    const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    // Once the term ratio has settled below one, the remaining tail is bounded
    // by a geometric series in max(|ratio|, z).
    const double rho = std::max(std::abs(ratio), z);
    if (rho < 1.0 && std::abs(term) * rho / (1.0 - rho) <= 1e-17 * std::abs(sum)) return sum;
  }
  std::ostringstream msg;
  msg << "gauss_2f1: series did not converge in " << kSeriesTermCap << " terms (a=" << a
      << ", b=" << b << ", c=" << c << ", z=" << z << ")";
  throw NonConvergenceError(msg.str(), sum, std::abs(term));
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << "ln_gamma: x = " << x << " must be positive";
    throw DomainError(msg.str());
  }
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double gauss_2f1_series(const HypergeometricParams& params, double z) {
  check_params(params);
  check_argument(z);
  return raw_series(params.a, params.b, params.c, z);
}

double gauss_2f1_connection(const HypergeometricParams& params, double z) {
  check_params(params);
  check_argument(z);
  const auto [a, b, c] = params;
  const double s = c - a - b;
  if (near_integer(s)) {
    std::ostringstream msg;
    msg << "gauss_2f1_connection: c-a-b = " << s << " is an integer (logarithmic case)";
    throw DomainError(msg.str());
  }
  const double w = 1.0 - z;
  const double gc = std::tgamma(c);
  const double first = gc * std::tgamma(s) * reciprocal_gamma(c - a) * reciprocal_gamma(c - b);
  const double second = gc * std::tgamma(-s) * reciprocal_gamma(a) * reciprocal_gamma(b);
  double value = 0.0;
  if (first != 0.0) value += first * raw_series(a, b, 1.0 - s, w);
  if (second != 0.0) value += second * std::pow(w, s) * raw_series(c - a, c - b, 1.0 + s, w);
  return value;
}

double gauss_2f1(const HypergeometricParams& params, double z) {
  check_params(params);
  check_argument(z);
  const bool terminating = is_non_positive_integer(params.a) || is_non_positive_integer(params.b);
  if (z <= 0.5 || terminating || near_integer(params.c - params.a - params.b)) {
    return raw_series(params.a, params.b, params.c, z);
  }
  return gauss_2f1_connection(params, z);
}

double incomplete_beta_13(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "incomplete_beta_13: x = " << x << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  if (x > 0.5) return 1.0 - incomplete_beta_13(1.0 - x);
  if (x == 0.0) return 0.0;
  // t = u^3 removes the t^(-2/3) endpoint singularity:
  //   (t(1-t))^(-2/3) dt = 3 (1 - u^3)^(-2/3) du.
  const auto integrand = [](double u) { return 3.0 * std::pow(1.0 - u * u * u, -2.0 / 3.0); };
  const double partial = integrate(integrand, 0.0, std::cbrt(x), 1e-15).value;
  // B(1/3, 1/3) = Gamma(1/3)^2 / Gamma(2/3).
  const double log_beta = 2.0 * ln_gamma(1.0 / 3.0) - ln_gamma(2.0 / 3.0);
  return partial * std::exp(-log_beta);
}

double agm(double a, double b) {
  if (a < 0.0 || b < 0.0) throw DomainError("agm: arguments must be non-negative");
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double mean = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = mean;
  }
  return a;
}

double elliptic_k(double m) {
  if (!(m >= 0.0 && m < 1.0)) {
    std::ostringstream msg;
    msg << "elliptic_k: parameter m = " << m << " outside [0, 1)";
    throw DomainError(msg.str());
  }
  return elliptic_k_from_complement(std::sqrt(1.0 - m));
}

double elliptic_k_from_complement(double k_prime) {
  if (!(k_prime > 0.0 && k_prime <= 1.0)) {
    std::ostringstream msg;
    msg << "elliptic_k: complementary modulus " << k_prime << " outside (0, 1]";
    throw DomainError(msg.str());
  }
  return std::numbers::pi / (2.0 * agm(1.0, k_prime));
}

double dedekind_eta4(double r) {
  if (!(r >= 1e-3)) {
    std::ostringstream msg;
    msg << "dedekind_eta4: r = " << r << " below 1e-3; use the modular reflection";
    throw DomainError(msg.str());
  }
  const double log_q = -2.0 * std::numbers::pi * r;
  const double q = std::exp(log_q);
  double log_product = 0.0;
  double qn = q;
  while (qn >= 1e-17) {
    log_product += std::log1p(-qn);
    qn *= q;
  }
  return std::exp(log_q / 6.0 + 4.0 * log_product);
}

}  // namespace perc
