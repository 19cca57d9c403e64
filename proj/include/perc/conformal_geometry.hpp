#pragma once

// Conformal bookkeeping for four boundary points: the cross-ratio, the
// rectangle's Schwarz-Christoffel correspondence r <-> k <-> eta, and the
// equilateral-triangle correspondence x <-> eta.

#include <array>
#include <limits>

namespace perc {

/// Marks the boundary point at infinity in a BoundaryQuad.
inline constexpr double kPointAtInfinity = std::numeric_limits<double>::infinity();

/// Four real boundary points in cyclic order.  At most one may be
/// kPointAtInfinity.
struct BoundaryQuad {
  std::array<double, 4> z;
};

/// Cross-ratio of a cyclically ordered quad; lies in (0, 1).
struct CrossRatio {
  double eta;
};

struct RectangleGeometry {
  double r;  // aspect ratio W/L
  double k;  // elliptic modulus
  CrossRatio eta;
};

struct TriangleGeometry {
  double x;  // length of XC on side BC of a unit equilateral triangle
  CrossRatio eta;
};

/// True when the points are strictly cyclically ordered on the extended real line.
bool is_cyclically_ordered(const BoundaryQuad& quad);

/// eta = (z1-z2)(z3-z4) / ((z1-z3)(z2-z4)), with the two factors containing a
/// point at infinity replaced by their limit.  Throws DomainError on
/// coincident points or a quad that is not cyclically ordered.
CrossRatio cross_ratio(const BoundaryQuad& quad);

/// Real Moebius map z -> (a z + b) / (c z + d) acting on the extended line.
struct MoebiusMap {
  double a, b, c, d;
  double operator()(double z) const;
};

BoundaryQuad apply(const MoebiusMap& map, const BoundaryQuad& quad);

/// Rectangle from its elliptic modulus: W = 2K(k^2), L = K(1-k^2).
RectangleGeometry rectangle_from_modulus(double k);

/// Inverts r(k) by bisection and returns eta = ((1-k)/(1+k))^2.
CrossRatio rectangle_eta(double r);

/// Full rectangle geometry (r, k, eta) for a given aspect ratio.
RectangleGeometry rectangle_from_aspect(double r);

/// Solves incomplete_beta_13(eta) = x by bisection.
CrossRatio triangle_eta(double x);

TriangleGeometry triangle_from_segment(double x);

}  // namespace perc
