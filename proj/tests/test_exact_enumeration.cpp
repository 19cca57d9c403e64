#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "perc/errors.hpp"
#include "perc/exact_enumeration.hpp"

using namespace perc;

TEST_CASE("Q polynomial evaluation") {
  const QPolynomial q({1.0, 2.0, 3.0});
  CHECK(q.degree() == 2);
  CHECK(q(2.0) == 17.0);
  CHECK(q.derivative(2.0) == 14.0);
  CHECK(QPolynomial().degree() == 0);
  CHECK(QPolynomial({0.0, 1.0, 0.0}).degree() == 1);
}

TEST_CASE("single bond") {
  const auto g = single_bond_graph();
  for (double p : {0.0, 0.3, 0.37, 0.5, 0.7, 1.0}) {
    const auto ps = enumerate_partition_set(g, p);
    CHECK(std::abs(crossing_prob_exact(ps) - p) < 1e-15);
    CHECK(std::abs(mean_crossing_exact(ps) - p) < 1e-15);
    CHECK(std::abs(mean_crossing_product_form(ps) - p) < 1e-15);
    CHECK(ps.z_ff(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("3x3 grid against frozen polynomials") {
  const auto g = square_grid_graph(3, 3);
  CHECK(g.bonds.size() == 12);
  for (const auto& v : oracle::grid3) {
    const auto ps = enumerate_partition_set(g, v.p);
    CHECK(std::abs(crossing_prob_exact(ps) - v.crossing) < 1e-13);
    CHECK(std::abs(mean_crossing_exact(ps) - v.mean_nc) < 1e-13);
    CHECK(std::abs(mean_crossing_product_form(ps) - v.mean_nc) < 1e-13);
  }
}

TEST_CASE("partition functions against a direct census") {
  for (const auto& g : {single_bond_graph(), square_grid_graph(3, 3), square_grid_graph(4, 3)}) {
    for (double p : {0.3, 0.5, 0.7}) {
      const auto ps = enumerate_partition_set(g, p);
      const auto direct = direct_crossing_census(g, p);
      CHECK(std::abs(crossing_prob_exact(ps) - direct.p_cross) <= 1e-12);
      CHECK(std::abs(mean_crossing_exact(ps) - direct.mean_nc) <= 1e-12);
      CHECK(std::abs(ps.z_aa(1.0) - 1.0) <= 1e-12);
      CHECK(std::abs(ps.z_af(1.0) - 1.0) <= 1e-12);
      CHECK(std::abs(ps.z_fa(1.0) - 1.0) <= 1e-12);
      CHECK(std::abs(ps.z_ff(1.0) - 1.0) <= 1e-12);
      CHECK(sums_to_one_exactly(ps.census_aa, ps.n_bonds));
      CHECK(sums_to_one_exactly(ps.census_af, ps.n_bonds));
      CHECK(sums_to_one_exactly(ps.census_fa, ps.n_bonds));
      CHECK(sums_to_one_exactly(ps.census_ff, ps.n_bonds));
      CHECK_FALSE(sums_to_one_exactly(ps.census_ab, ps.n_bonds));
    }
  }
}

TEST_CASE("z_ab excludes crossing configurations") {
  const auto ps = enumerate_partition_set(single_bond_graph(), 0.5);
  // only the empty configuration avoids a crossing
  CHECK(ps.z_ab(1.0) == doctest::Approx(0.5));
  CHECK(ps.z_aa(1.0) - ps.z_ab(1.0) == doctest::Approx(0.5));
}

TEST_CASE("enumeration is independent of the worker count") {
  const auto g = square_grid_graph(4, 3);
  const auto a = enumerate_partition_set(g, 0.4, 1);
  const auto b = enumerate_partition_set(g, 0.4, 3);
  CHECK(a.census_ff == b.census_ff);
  CHECK(a.census_ab == b.census_ab);
  CHECK(a.z_ff.coefficients() == b.z_ff.coefficients());
  CHECK(crossing_prob_exact(a) == crossing_prob_exact(b));
}

TEST_CASE("crossing probability increases with p") {
  const auto g = square_grid_graph(3, 3);
  double prev = -1.0;
  for (int i = 0; i <= 20; ++i) {
    const double v = crossing_prob_exact(enumerate_partition_set(g, i / 20.0));
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("enumeration input validation") {
  CHECK_THROWS_AS(enumerate_partition_set(single_bond_graph(), 1.5), InvalidInput);
  CHECK_THROWS_AS(enumerate_partition_set(square_grid_graph(5, 5), 0.5), InvalidInput);  // 40 bonds
  BoundaryGraph overlapping{2, {{0, 1}}, {0}, {0}};
  CHECK_THROWS_AS(enumerate_partition_set(overlapping, 0.5), InvalidInput);
}
