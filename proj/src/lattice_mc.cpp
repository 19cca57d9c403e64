#include "perc/lattice_mc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "perc/errors.hpp"
#include "perc/rng.hpp"
#include "perc/stats.hpp"

namespace perc {
namespace {

struct Tally {
  std::uint64_t crossings = 0;
  CountMoments nc;
};

Tally run_range(const Lattice& lattice, double p, std::uint64_t first, std::uint64_t last,
                std::uint64_t master_seed) {
  TrialScratch scratch;
  Tally tally;
  for (std::uint64_t i = first; i < last; ++i) {
    const TrialResult r = run_trial(lattice, p, derive_seed(master_seed, i), scratch);
    if (r.crossed) ++tally.crossings;
    tally.nc.add(r.n_crossing_clusters);
  }
  return tally;
}

// Splits [0, n) into contiguous blocks, one per worker.  Tallies are integer
// sums, so the result does not depend on how the range is cut.
Tally run_parallel(const Lattice& lattice, double p, std::uint64_t n, std::uint64_t master_seed, int workers) {
  const std::uint64_t w = std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(workers, 1)), 1, std::max<std::uint64_t>(n, 1));
  if (w == 1) return run_range(lattice, p, 0, n, master_seed);
  std::vector<Tally> partial(w);
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (std::uint64_t k = 0; k < w; ++k) {
    const std::uint64_t first = n * k / w;
    const std::uint64_t last = n * (k + 1) / w;
    threads.emplace_back([&, k, first, last] { partial[k] = run_range(lattice, p, first, last, master_seed); });
  }
  for (auto& t : threads) t.join();
  Tally total;
  for (const auto& t : partial) {
    total.crossings += t.crossings;
    total.nc.merge(t.nc);
  }
  return total;
}

}  // namespace

void TrialScratch::prepare(std::uint32_t n_sites) {
  uf.reset(n_sites);
  open.resize(n_sites);
  if (touches_first.size() != n_sites) {
    touches_first.assign(n_sites, 0);
    counted.assign(n_sites, 0);
    stamp = 0;
  }
  if (++stamp == 0) {
    std::fill(touches_first.begin(), touches_first.end(), 0);
    std::fill(counted.begin(), counted.end(), 0);
    stamp = 1;
  }
}

TrialResult run_trial(const Lattice& lattice, double p, std::uint64_t trial_seed, TrialScratch& scratch) {
  const BoundaryGraph& g = lattice.graph;
  scratch.prepare(g.n_sites);
  CounterRng rng(trial_seed);
  auto& uf = scratch.uf;
  auto& open = scratch.open;

  if (lattice.occupation == Occupation::sites) {
    for (std::uint32_t s = 0; s < g.n_sites; ++s) open[s] = rng.uniform() < p;
    for (const auto& [u, v] : g.bonds) {
      if (open[u] && open[v]) uf.unite(u, v);
    }
  } else {
    std::fill(open.begin(), open.end(), 1);
    for (const auto& [u, v] : g.bonds) {
      if (rng.uniform() < p) uf.unite(u, v);
    }
  }

  // Distinct crossing clusters: roots seen on gamma1, then counted once each
  // when met again on gamma2.
  const std::uint32_t stamp = scratch.stamp;
  for (auto s : g.gamma1) {
    if (open[s]) scratch.touches_first[uf.find(s)] = stamp;
  }
  TrialResult result;
  for (auto s : g.gamma2) {
    if (!open[s]) continue;
    const std::uint32_t root = uf.find(s);
    if (scratch.touches_first[root] == stamp && scratch.counted[root] != stamp) {
      scratch.counted[root] = stamp;
      ++result.n_crossing_clusters;
    }
  }
  result.crossed = result.n_crossing_clusters > 0;
  return result;
}

TrialResult run_trial(const LatticeSpec& spec, std::uint64_t trial_seed) {
  const Lattice lattice = build_lattice(spec);
  TrialScratch scratch;
  return run_trial(lattice, spec.p, trial_seed, scratch);
}

CrossingStats run_experiment(const Lattice& lattice, double p, std::uint64_t n_trials, std::uint64_t master_seed,
                             int workers) {
  if (n_trials < 1) throw InvalidInput("run_experiment: n_trials must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("run_experiment: p must lie in [0, 1]");
  const Tally t = run_parallel(lattice, p, n_trials, master_seed, workers);
  CrossingStats st;
  st.trials = n_trials;
  st.crossings = t.crossings;
  st.p_hat = static_cast<double>(t.crossings) / static_cast<double>(n_trials);
  const Interval ci = wilson_interval(t.crossings, n_trials);
  st.p_ci_low = ci.low;
  st.p_ci_high = ci.high;
  st.mean_nc = t.nc.mean();
  st.se_nc = t.nc.standard_error();
  st.master_seed = master_seed;
  st.effective_aspect_ratio = lattice.effective_aspect_ratio;
  return st;
}

CrossingStats run_experiment(const LatticeSpec& spec, std::uint64_t n_trials, std::uint64_t master_seed,
                             int workers) {
  return run_experiment(build_lattice(spec), spec.p, n_trials, master_seed, workers);
}

LatticeSpec rectangle_spec(LatticeKind kind, int nx, int ny, double p) {
  LatticeSpec s;
  s.kind = kind;
  s.shape = Shape::rectangle;
  s.nx = nx;
  s.ny = ny;
  s.p = p;
  s.gamma1 = {Side::left};
  s.gamma2 = {Side::right};
  return s;
}

LatticeSpec smirnov_spec(int side_sites, double p, double query_x) {
  if (!(query_x >= 0.0 && query_x <= 1.0)) throw InvalidInput("smirnov_h: query x must lie in [0, 1]");
  if (side_sites < 2) throw InvalidInput("smirnov_h: the triangle needs at least 2 sites per side");
  LatticeSpec s;
  s.kind = LatticeKind::triangular_site;
  s.shape = Shape::equilateral_triangle;
  s.nx = side_sites;
  s.ny = side_sites;
  s.p = p;
  s.gamma1 = {Side::ab, 0, side_sites - 1};
  const int m = static_cast<int>(std::lround(query_x * side_sites));
  s.gamma2 = {Side::bc, 0, m};
  return s;
}

SmirnovEstimate smirnov_h(const LatticeSpec& spec, double query_x, std::uint64_t n_trials,
                          std::uint64_t master_seed, int workers) {
  if (spec.shape != Shape::equilateral_triangle || spec.kind != LatticeKind::triangular_site) {
    throw InvalidInput("smirnov_h: needs the equilateral triangle on the triangular site lattice");
  }
  const LatticeSpec s = smirnov_spec(spec.nx, spec.p, query_x);
  const CrossingStats st = run_experiment(s, n_trials, master_seed, workers);
  SmirnovEstimate e;
  e.x_requested = query_x;
  e.segment_sites = s.gamma2.end;
  e.x_effective = static_cast<double>(e.segment_sites) / spec.nx;
  e.trials = st.trials;
  e.hits = st.crossings;
  e.h_hat = st.p_hat;
  e.ci_low = st.p_ci_low;
  e.ci_high = st.p_ci_high;
  e.master_seed = master_seed;
  return e;
}

LatticeSpec strip_spec(int l_sites, int w_sites, double p, LatticeKind kind) {
  if (l_sites < 1) throw InvalidInput("strip: height L must be >= 1");
  LatticeSpec s;
  s.kind = kind;
  s.shape = Shape::periodic_strip;
  s.nx = w_sites;
  s.ny = l_sites + 1;
  s.p = p;
  s.gamma1 = {Side::bottom};
  s.gamma2 = {Side::top};
  return s;
}

CrossingStats strip_crossing_count(int l_sites, int w_sites, double p, std::uint64_t n_trials,
                                   std::uint64_t master_seed, int workers, LatticeKind kind) {
  return run_experiment(strip_spec(l_sites, w_sites, p, kind), n_trials, master_seed, workers);
}

}  // namespace perc
