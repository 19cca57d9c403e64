#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "perc/conformal_geometry.hpp"
#include "perc/errors.hpp"

using namespace perc;

TEST_CASE("cross ratio of simple quads") {
  CHECK(std::abs(cross_ratio({{0.0, 1.0, 2.0, 3.0}}).eta - 0.25) < 1e-15);
  // a point at infinity in any slot is handled as a limit
  CHECK(std::abs(cross_ratio({{0.0, 0.25, 1.0, kPointAtInfinity}}).eta - 0.25) < 1e-15);
  CHECK(std::abs(cross_ratio({{kPointAtInfinity, 0.0, 0.25, 1.0}}).eta -
                 cross_ratio({{-1e12, 0.0, 0.25, 1.0}}).eta) < 1e-9);
}

TEST_CASE("cross ratio rejects unordered or degenerate quads") {
  CHECK_FALSE(is_cyclically_ordered({{0.0, 2.0, 1.0, 3.0}}));
  CHECK_THROWS_AS(cross_ratio({{0.0, 2.0, 1.0, 3.0}}), DomainError);
  CHECK_THROWS_AS(cross_ratio({{0.0, 0.0, 1.0, 3.0}}), DomainError);
  CHECK(is_cyclically_ordered({{2.0, 3.0, 0.0, 1.0}}));  // cyclic shift is fine
}

TEST_CASE("cross ratio is invariant under random Moebius maps") {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> point(-2.0, 2.0);
  int tested = 0;
  while (tested < 100) {
    MoebiusMap m{coef(gen), coef(gen), coef(gen), coef(gen)};
    const double det = m.a * m.d - m.b * m.c;
    if (det < 0.5) continue;  // orientation-preserving maps of the upper half-plane
    std::array<double, 4> z{point(gen), point(gen), point(gen), point(gen)};
    std::sort(z.begin(), z.end());
    if (z[1] - z[0] < 0.05 || z[2] - z[1] < 0.05 || z[3] - z[2] < 0.05) continue;
    // keep the pole away from the points
    bool near_pole = false;
    for (double x : z) near_pole = near_pole || std::abs(m.c * x + m.d) < 1e-3;
    if (near_pole) continue;
    const BoundaryQuad q{z};
    const BoundaryQuad mapped = apply(m, q);
    REQUIRE(is_cyclically_ordered(mapped));
    CHECK(std::abs(cross_ratio(mapped).eta - cross_ratio(q).eta) < 1e-10);
    ++tested;
  }
}

TEST_CASE("rectangle eta at the exact aspect ratios") {
  CHECK(std::abs(rectangle_eta(1.0).eta - 0.5) < 1e-10);
  CHECK(std::abs(rectangle_eta(2.0).eta - (17.0 - 12.0 * std::sqrt(2.0))) < 1e-10);
  for (double r : {1.2, 1.5, 2.0, 3.0}) {
    CHECK(std::abs(rectangle_eta(r).eta + rectangle_eta(1.0 / r).eta - 1.0) < 1e-10);
  }
}

TEST_CASE("rectangle eta decreases with aspect ratio") {
  double prev = 1.0;
  for (double r = 0.1; r < 8.0; r *= 1.1) {
    const double eta = rectangle_eta(r).eta;
    CHECK(eta < prev);
    CHECK(eta > 0.0);
    prev = eta;
  }
  CHECK_THROWS_AS(rectangle_eta(0.0), DomainError);
  CHECK_THROWS_AS(rectangle_eta(-1.0), DomainError);
}

TEST_CASE("rectangle from modulus round trips") {
  const auto g = rectangle_from_modulus(0.5);
  CHECK(std::abs(g.r - oracle::aspect_at_k_half) < 1e-14);
  CHECK(std::abs(g.eta.eta - 1.0 / 9.0) < 1e-14);
  for (double r : {0.3, 1.0, 2.0, 5.0}) {
    const auto h = rectangle_from_aspect(r);
    CHECK(std::abs(rectangle_from_modulus(h.k).r - r) < 1e-12 * r);
  }
  CHECK_THROWS_AS(rectangle_from_modulus(0.0), DomainError);
  CHECK_THROWS_AS(rectangle_from_modulus(1.0), DomainError);
}

TEST_CASE("triangle eta") {
  CHECK(std::abs(triangle_eta(0.25).eta - oracle::triangle_eta_quarter) < 1e-15);
  CHECK(std::abs(triangle_eta(0.5).eta - 0.5) < 1e-15);
  double prev = 0.0;
  for (int i = 1; i < 20; ++i) {
    const double x = i / 20.0;
    const double eta = triangle_eta(x).eta;
    CHECK(eta > prev);
    CHECK(std::abs(eta + triangle_eta(1.0 - x).eta - 1.0) < 1e-14);
    prev = eta;
  }
  CHECK(std::abs(triangle_from_segment(0.3).x - 0.3) < 1e-15);
  CHECK(triangle_eta(0.0).eta == 0.0);
  CHECK(triangle_eta(1.0).eta == 1.0);
  CHECK_THROWS_AS(triangle_eta(-0.1), DomainError);
  CHECK_THROWS_AS(triangle_eta(1.1), DomainError);
}
