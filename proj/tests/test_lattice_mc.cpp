#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "perc/errors.hpp"
#include "perc/exact_enumeration.hpp"
#include "perc/lattice.hpp"
#include "perc/lattice_mc.hpp"
#include "perc/rng.hpp"
#include "perc/stats.hpp"
#include "perc/union_find.hpp"

using namespace perc;

TEST_CASE("counter rng") {
  CounterRng a(7), b(7), c(8);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
  }
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(42, i));
  CHECK(seeds.size() == 1000);

  CounterRng r(1);
  double sum = 0.0, sum_sq = 0.0, usum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    usum += u;
    const double z = r.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(usum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sum_sq / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("union find") {
  UnionFind uf(6);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(2, 3));
  CHECK_FALSE(uf.unite(1, 0));
  CHECK(uf.unite(1, 3));
  CHECK(uf.find(0) == uf.find(2));
  CHECK(uf.find(4) != uf.find(0));
  CHECK(uf.set_size(3) == 4);
  uf.reset(3);
  CHECK(uf.size() == 3);
  CHECK(uf.set_size(0) == 1);
}

TEST_CASE("wilson interval") {
  const auto zero = wilson_interval(0, 10);
  CHECK(zero.low == 0.0);
  CHECK(zero.high > 0.0);
  const auto half = wilson_interval(50, 100);
  CHECK(std::abs(half.low + half.high - 1.0) < 1e-15);
  CHECK(half.low == doctest::Approx(0.40383153).epsilon(1e-7));
  const auto all = wilson_interval(10, 10);
  CHECK(all.high == 1.0);
  CHECK_THROWS_AS(wilson_interval(11, 10), InvalidInput);
}

TEST_CASE("lattice sizes and arcs") {
  const auto sq = build_lattice(rectangle_spec(LatticeKind::square_bond, 5, 4));
  CHECK(sq.graph.n_sites == 20);
  CHECK(sq.graph.bonds.size() == 4u * 4u + 5u * 3u);
  CHECK(sq.graph.gamma1.size() == 4);
  CHECK(sq.occupation == Occupation::bonds);
  CHECK(sq.effective_aspect_ratio == 1.0);

  const auto tri = build_lattice(rectangle_spec(LatticeKind::triangular_site, 6, 5));
  CHECK(tri.graph.n_sites == 30);
  CHECK(tri.occupation == Occupation::sites);
  // interior sites have six neighbours: bonds = 3 nx ny - 2 nx - 2 ny + 1 for offset rows
  std::vector<int> degree(tri.graph.n_sites, 0);
  for (const auto& [u, v] : tri.graph.bonds) {
    ++degree[u];
    ++degree[v];
  }
  CHECK(degree[2 * 6 + 2] == 6);

  LatticeSpec t;
  t.shape = Shape::equilateral_triangle;
  t.nx = 10;
  t.gamma1 = {Side::ab, 0, 9};
  t.gamma2 = {Side::bc};
  CHECK(side_length(t, Side::ab) == 10);
  const auto tl = build_lattice(t);
  CHECK(tl.graph.n_sites == 55);
  CHECK(tl.graph.bonds.size() == 3u * 45u);
  CHECK(std::isnan(tl.effective_aspect_ratio));

  const auto strip = strip_spec(8, 48, 0.5);
  CHECK(strip.ny == 9);
  CHECK(effective_aspect_ratio(strip) == 6.0);
}

TEST_CASE("triangle arcs meet only at corners") {
  LatticeSpec t = smirnov_spec(12, 0.5, 0.5);
  const auto ab = arc_sites(t, {Side::ab});
  const auto bc = arc_sites(t, {Side::bc});
  const auto ac = arc_sites(t, {Side::ac});
  CHECK(ab.front() == ac.front());  // corner A
  CHECK(ab.back() == bc.back());    // corner B
  CHECK(bc.front() == ac.back());   // corner C
  CHECK(arc_sites(t, t.gamma2).size() == 6);
  CHECK(arc_sites(t, t.gamma1).size() == 11);
}

TEST_CASE("invalid specs are rejected") {
  auto s = rectangle_spec(LatticeKind::square_bond, 4, 4);
  s.nx = 0;
  CHECK_THROWS_AS(validate(s), InvalidInput);
  s = rectangle_spec(LatticeKind::square_bond, 4, 4, 1.5);
  CHECK_THROWS_AS(validate(s), InvalidInput);
  s = rectangle_spec(LatticeKind::square_bond, 4, 4);
  s.gamma2 = {Side::left};
  CHECK_THROWS_AS(validate(s), InvalidInput);
  CHECK_THROWS_AS(lattice_kind_from_string("hexagonal"), InvalidInput);
  BoundaryGraph g{2, {{0, 2}}, {0}, {1}};
  CHECK_THROWS_AS(validate(g), InvalidInput);
  CHECK_THROWS_AS(run_experiment(rectangle_spec(LatticeKind::square_bond, 4, 4), 0, 1), InvalidInput);
}

TEST_CASE("trivial occupation probabilities") {
  auto s = rectangle_spec(LatticeKind::triangular_site, 10, 10, 0.0);
  auto st = run_experiment(s, 50, 3);
  CHECK(st.crossings == 0);
  s.p = 1.0;
  st = run_experiment(s, 50, 3);
  CHECK(st.crossings == 50);
  CHECK(st.mean_nc == 1.0);
}

TEST_CASE("results do not depend on the worker count") {
  const auto spec = rectangle_spec(LatticeKind::triangular_site, 24, 20);
  const auto ref = run_experiment(spec, 999, 11, 1);
  for (int workers : {2, 3, 4, 7}) {
    const auto st = run_experiment(spec, 999, 11, workers);
    CHECK(st.crossings == ref.crossings);
    CHECK(st.mean_nc == ref.mean_nc);
    CHECK(st.se_nc == ref.se_nc);
  }
  const auto h1 = smirnov_h(smirnov_spec(30, 0.5, 0.4), 0.4, 500, 5, 1);
  const auto h3 = smirnov_h(smirnov_spec(30, 0.5, 0.4), 0.4, 500, 5, 3);
  CHECK(h1.hits == h3.hits);
}

TEST_CASE("crossing is monotone in p under coupling") {
  for (auto kind : {LatticeKind::square_bond, LatticeKind::triangular_site}) {
    const auto lo = build_lattice(rectangle_spec(kind, 12, 12));
    TrialScratch scratch;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      bool prev = false;
      for (double p : {0.3, 0.45, 0.5, 0.55, 0.7}) {
        const bool crossed = run_trial(lo, p, seed, scratch).crossed;
        CHECK((!prev || crossed));
        prev = crossed;
      }
    }
  }
}

TEST_CASE("crossing cluster count on hand-made graphs") {
  // two parallel bonds from left to right and one dangling site
  BoundaryGraph g{5, {{0, 1}, {2, 3}, {3, 4}}, {0, 2}, {1, 3}};
  const auto lat = lattice_from_graph(g);
  const auto st = run_experiment(lat, 1.0, 5, 1);
  CHECK(st.mean_nc == 2.0);
}

TEST_CASE("Monte Carlo agrees with exact enumeration on the 3x3 grid") {
  const auto g = square_grid_graph(3, 3);
  for (const auto& v : oracle::grid3) {
    const auto st = run_experiment(lattice_from_graph(g), v.p, 100000, 17);
    const double sigma = std::sqrt(v.crossing * (1.0 - v.crossing) / 100000.0);
    CHECK(std::abs(st.p_hat - v.crossing) < 4.0 * sigma);
    CHECK(std::abs(st.mean_nc - v.mean_nc) < 4.0 * st.se_nc);
  }
}

TEST_CASE("square bond self duality") {
  // the (n+1) x n site grid crosses left-right with probability exactly 1/2
  for (int n = 1; n <= 3; ++n) {
    const auto ps = enumerate_partition_set(square_grid_graph(n + 1, n), 0.5);
    CHECK(std::abs(crossing_prob_exact(ps) - 0.5) < 1e-15);
  }
  const auto st = run_experiment(rectangle_spec(LatticeKind::square_bond, 21, 20), 20000, 4);
  CHECK(std::abs(st.p_hat - 0.5) < 4.0 * std::sqrt(0.25 / 20000.0));
}

TEST_CASE("triangular site lattice is self-matching") {
  // P(left-right) + P(top-bottom) = 1 at p = 1/2 on any rectangle
  auto lr = rectangle_spec(LatticeKind::triangular_site, 20, 14);
  auto tb = lr;
  tb.gamma1 = {Side::bottom};
  tb.gamma2 = {Side::top};
  const std::uint64_t n = 20000;
  const auto a = run_experiment(lr, n, 8);
  const auto b = run_experiment(tb, n, 9);
  const double sigma = std::sqrt(0.5 / n);
  CHECK(std::abs(a.p_hat + b.p_hat - 1.0) < 4.0 * sigma);
}

TEST_CASE("smirnov spec snaps x to the lattice") {
  const auto s = smirnov_spec(120, 0.5, 0.25);
  const auto e = smirnov_h(s, 0.25, 10, 1);
  CHECK(e.segment_sites == 30);
  CHECK(e.x_effective == 0.25);
  CHECK_THROWS_AS(smirnov_spec(120, 0.5, 1.5), InvalidInput);
}
