#include "perc/conformal_geometry.hpp"

#include <cmath>
#include <sstream>

#include "perc/errors.hpp"
#include "perc/special_functions.hpp"

namespace perc {
namespace {

// Modulus pair parametrised by u = ln(k / k').  Both k and k' stay accurate
// at either extreme, which plain bisection on k does not give near k -> 1.
struct ModulusPair {
  double k;
  double k_prime;
};

ModulusPair modulus_from_log_ratio(double u) {
  if (u <= 0.0) {
    const double e = std::exp(u);
    const double kp = 1.0 / std::sqrt(1.0 + e * e);
    return {e * kp, kp};
  }
  const double e = std::exp(-u);
  const double k = 1.0 / std::sqrt(1.0 + e * e);
  return {k, e * k};
}

// r = 2 K(k^2) / K(k'^2) = 2 AGM(1, k) / AGM(1, k').
double aspect_from_pair(const ModulusPair& m) { return 2.0 * agm(1.0, m.k) / agm(1.0, m.k_prime); }

// ((1-k)/(1+k))^2 with 1-k = k'^2 / (1+k).
double eta_from_pair(const ModulusPair& m) {
  const double ratio = m.k_prime * m.k_prime / ((1.0 + m.k) * (1.0 + m.k));
  return ratio * ratio;
}

}  // namespace

bool is_cyclically_ordered(const BoundaryQuad& quad) {
  int infinite = 0;
  for (double z : quad.z) {
    if (std::isnan(z)) return false;
    if (std::isinf(z)) ++infinite;
  }
  if (infinite > 1) return false;
  // Rotate the point at infinity (if any) to the last slot.  Rotation keeps
  // cyclic order, so the finite points must then increase strictly, up to a
  // single wrap-around when all four are finite.
  int descents = 0;
  for (int i = 0; i < 4; ++i) {
    const double here = quad.z[i];
    const double next = quad.z[(i + 1) % 4];
    if (here == next) return false;
    if (std::isinf(here) || std::isinf(next)) continue;
    if (next < here) ++descents;
  }
  return infinite == 1 ? descents == 0 : descents == 1;
}

CrossRatio cross_ratio(const BoundaryQuad& quad) {
  const auto& [z1, z2, z3, z4] = quad.z;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (quad.z[i] == quad.z[j]) throw DomainError("cross_ratio: coincident boundary points");
    }
  }
  if (!is_cyclically_ordered(quad)) throw DomainError("cross_ratio: points are not cyclically ordered");
  // Limits of the two factors that contain the point at infinity.
  if (std::isinf(z1)) return {(z3 - z4) / (z2 - z4)};
  if (std::isinf(z2)) return {(z3 - z4) / (z3 - z1)};
  if (std::isinf(z3)) return {(z1 - z2) / (z4 - z2)};
  if (std::isinf(z4)) return {(z1 - z2) / (z1 - z3)};
  return {(z1 - z2) * (z3 - z4) / ((z1 - z3) * (z2 - z4))};
}

double MoebiusMap::operator()(double z) const {
  if (std::isinf(z)) return c == 0.0 ? kPointAtInfinity : a / c;
  const double denominator = c * z + d;
  if (denominator == 0.0) return kPointAtInfinity;
  return (a * z + b) / denominator;
}

BoundaryQuad apply(const MoebiusMap& map, const BoundaryQuad& quad) {
  BoundaryQuad out{};
  for (int i = 0; i < 4; ++i) out.z[i] = map(quad.z[i]);
  return out;
}

RectangleGeometry rectangle_from_modulus(double k) {
  if (!(k > 0.0 && k < 1.0)) {
    std::ostringstream msg;
    msg << "rectangle_from_modulus: k = " << k << " outside (0, 1)";
    throw DomainError(msg.str());
  }
  const ModulusPair m{k, std::sqrt((1.0 - k) * (1.0 + k))};
  return {aspect_from_pair(m), k, {eta_from_pair(m)}};
}

RectangleGeometry rectangle_from_aspect(double r) {
  if (!(r > 0.0) || std::isinf(r)) {
    std::ostringstream msg;
    msg << "rectangle_eta: aspect ratio r = " << r << " must be positive and finite";
    throw DomainError(msg.str());
  }
  // r(u) is strictly increasing in u = ln(k/k').
  double lo = -700.0;
  double hi = 700.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (aspect_from_pair(modulus_from_log_ratio(mid)) < r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const ModulusPair m = modulus_from_log_ratio(0.5 * (lo + hi));
  return {aspect_from_pair(m), m.k, {eta_from_pair(m)}};
}

CrossRatio rectangle_eta(double r) { return rectangle_from_aspect(r).eta; }

CrossRatio triangle_eta(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "triangle_eta: x = " << x << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  if (x == 0.0 || x == 1.0) return {x};
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (incomplete_beta_13(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi)};
}

TriangleGeometry triangle_from_segment(double x) { return {x, triangle_eta(x)}; }

}  // namespace perc
