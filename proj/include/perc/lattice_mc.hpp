#pragma once

// Monte Carlo engine for critical lattice percolation: sample a
// configuration, label clusters by union-find and count the distinct
// clusters touching both boundary arcs.

#include <cstdint>
#include <vector>

#include "perc/lattice.hpp"
#include "perc/union_find.hpp"

namespace perc {

/// Exactly known critical points of both supported lattices.
inline constexpr double kCriticalP = 0.5;

struct TrialResult {
  bool crossed = false;
  std::uint32_t n_crossing_clusters = 0;
};

struct CrossingStats {
  std::uint64_t trials = 0;
  std::uint64_t crossings = 0;
  double p_hat = 0.0;
  double p_ci_low = 0.0;
  double p_ci_high = 1.0;
  double mean_nc = 0.0;
  double se_nc = 0.0;
  std::uint64_t master_seed = 0;
  double effective_aspect_ratio = 0.0;
};

/// Per-worker scratch space, reused across trials.
class TrialScratch {
 public:
  void prepare(std::uint32_t n_sites);

  UnionFind uf;
  std::vector<std::uint8_t> open;
  std::vector<std::uint32_t> touches_first;
  std::vector<std::uint32_t> counted;
  std::uint32_t stamp = 0;
};

/// One sample.  Each bond (bond occupation) or site (site occupation) draws
/// exactly one uniform from CounterRng(trial_seed) in index order and is open
/// when it falls below p, so trials at different p with the same seed are
/// coupled.
TrialResult run_trial(const Lattice& lattice, double p, std::uint64_t trial_seed, TrialScratch& scratch);
TrialResult run_trial(const LatticeSpec& spec, std::uint64_t trial_seed);

/// n_trials samples; trial i uses derive_seed(master_seed, i).  Bit-identical
/// for any worker count.
CrossingStats run_experiment(const Lattice& lattice, double p, std::uint64_t n_trials,
                             std::uint64_t master_seed, int workers = 1);
CrossingStats run_experiment(const LatticeSpec& spec, std::uint64_t n_trials, std::uint64_t master_seed,
                             int workers = 1);

struct SmirnovEstimate {
  double x_requested = 0.0;
  double x_effective = 0.0;  // snapped to the lattice: segment_sites / side_sites
  int segment_sites = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double h_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::uint64_t master_seed = 0;
};

/// Lattice spec for the triangle observable at a boundary point X of BC:
/// gamma1 = AB without the corner B, gamma2 = XC (the first m sites of BC
/// counted from C, m = round(x n)).
LatticeSpec smirnov_spec(int side_sites, double p, double query_x);

/// Fraction of trials in which an open cluster joins AB to XC, i.e. X is cut
/// off from AC by a cluster spanning AB to BC.  `spec` must be the
/// equilateral triangle on the triangular site lattice; its arcs are replaced.
SmirnovEstimate smirnov_h(const LatticeSpec& spec, double query_x, std::uint64_t n_trials,
                          std::uint64_t master_seed, int workers = 1);

/// Periodic strip of circumference w_sites and height l_sites lattice
/// spacings (l_sites + 1 rows), crossing from bottom to top.
LatticeSpec strip_spec(int l_sites, int w_sites, double p, LatticeKind kind = LatticeKind::square_bond);

CrossingStats strip_crossing_count(int l_sites, int w_sites, double p, std::uint64_t n_trials,
                                   std::uint64_t master_seed, int workers = 1,
                                   LatticeKind kind = LatticeKind::square_bond);

/// Rectangle with left/right arcs.
LatticeSpec rectangle_spec(LatticeKind kind, int nx, int ny, double p = kCriticalP);

}  // namespace perc
