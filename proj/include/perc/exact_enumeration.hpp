#pragma once

// Exact random-cluster partition functions of small graphs, by enumerating
// every bond subset.  Each Z is a polynomial in Q whose coefficients carry the
// bond weights p^|C| (1-p)^(B-|C|).

#include <cstdint>
#include <vector>

#include "perc/lattice.hpp"

namespace perc {

using SmallGraph = BoundaryGraph;

inline constexpr int kMaxEnumerationBonds = 24;

class QPolynomial {
 public:
  QPolynomial() = default;
  explicit QPolynomial(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {}

  /// Coefficient of Q^k.
  const std::vector<double>& coefficients() const { return coefficients_; }
  int degree() const;

  double operator()(double q) const;
  double derivative(double q) const;

 private:
  std::vector<double> coefficients_;
};

/// Configuration counts behind one partition function: counts[k][j] is the
/// number of bond subsets with k open bonds that contribute Q^j.  Exact, and
/// independent of p.
using ConfigurationCensus = std::vector<std::vector<std::uint64_t>>;

struct PartitionSet {
  QPolynomial z_ff, z_aa, z_ab, z_af, z_fa;
  double p = 0.0;
  int n_bonds = 0;
  ConfigurationCensus census_ff, census_aa, census_ab, census_af, census_fa;
};

/// Enumerates all 2^B bond subsets.  Per configuration, clusters are split
/// into N_0 (touch neither arc), N_L (gamma1 only), N_R (gamma2 only) and N_c
/// (both), and the monomials
///   Z_ff: Q^(N_c+N_L+N_R+N_0)   Z_aa: Q^N_0   Z_af: Q^(N_R+N_0)   Z_fa: Q^(N_L+N_0)
///   Z_ab: Q^N_0, only for configurations with N_c = 0
/// are accumulated.  The subset range is cut into fixed shards that workers
/// pick up, merged in shard order, so the result does not depend on workers.
PartitionSet enumerate_partition_set(const SmallGraph& graph, double p, int workers = 1);

/// P = Z_aa(1) - Z_ab(1).
double crossing_prob_exact(const PartitionSet& pset);

/// <N_c> = d/dQ (Z_ff + Z_aa - Z_fa - Z_af) at Q = 1.
double mean_crossing_exact(const PartitionSet& pset);

/// d/dQ (Z_ff Z_aa / (Z_fa Z_af)) at Q = 1.
double mean_crossing_product_form(const PartitionSet& pset);

/// True when, for every k, the census of `census` sums to C(B, k) over Q
/// powers, i.e. Z(1) = sum_k C(B,k) p^k (1-p)^(B-k) = 1 identically in p.
bool sums_to_one_exactly(const ConfigurationCensus& census, int n_bonds);

struct DirectCensus {
  double p_cross = 0.0;
  double mean_nc = 0.0;
};

/// Crossing probability and mean N_c by summing configuration probabilities
/// directly, with flood-fill cluster labelling (no union-find, no Q).
DirectCensus direct_crossing_census(const SmallGraph& graph, double p);

/// Square-bond grid of nx x ny sites with left/right arcs.
SmallGraph square_grid_graph(int nx, int ny);

/// Two sites joined by one bond, site 0 in gamma1 and site 1 in gamma2.
SmallGraph single_bond_graph();

}  // namespace perc
