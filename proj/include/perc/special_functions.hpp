#pragma once

// Scalar special-function kernels: log-gamma, Gauss 2F1, the (1/3,1/3)
// regularized incomplete beta, complete elliptic K and eta(ir)^4.
//
// All functions are pure.  Accuracy figures quoted below are contract and are
// checked by tests/test_special_functions.cpp.

namespace perc {

struct HypergeometricParams {
  double a;
  double b;
  double c;  // not zero or a negative integer
};

/// ln Gamma(x) for x > 0, relative error <= 1e-13.  Throws DomainError for x <= 0.
double ln_gamma(double x);

/// Gauss hypergeometric 2F1(a,b;c;z) for 0 <= z < 1, relative tolerance 1e-13.
/// Uses the raw series for z <= 1/2 and the connection formula in powers of
/// (1-z) above that.  Terminating series (a or b a non-positive integer) and
/// integer c-a-b fall back to the raw series.
double gauss_2f1(const HypergeometricParams& params, double z);

/// The raw Gauss series only.  Exposed so the two evaluation routes can be
/// checked against each other.
double gauss_2f1_series(const HypergeometricParams& params, double z);

/// The z -> 1-z connection formula only.  Requires c-a-b non-integer and
/// a, b, c-a, c-b away from the Gamma poles.
double gauss_2f1_connection(const HypergeometricParams& params, double z);

/// Regularized incomplete beta I(x; 1/3, 1/3), absolute tolerance 1e-11.
double incomplete_beta_13(double x);

/// Arithmetic-geometric mean of two non-negative numbers.
double agm(double a, double b);

/// Complete elliptic integral of the first kind, parameter convention K(m), m = k^2.
/// Domain 0 <= m < 1.
double elliptic_k(double m);

/// K evaluated from the complementary modulus k' = sqrt(1 - m) directly, which
/// stays accurate as m -> 1.
double elliptic_k_from_complement(double k_prime);

/// eta(i r)^4 = q^(1/6) prod (1 - q^n)^4 with q = exp(-2 pi r).  Rejects r < 1e-3.
double dedekind_eta4(double r);

}  // namespace perc
