#include "perc/exact_enumeration.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "perc/errors.hpp"
#include "perc/union_find.hpp"

namespace perc {
namespace {

constexpr int kShards = 64;

enum Member { kFF, kAA, kAB, kAF, kFA, kMembers };

using Census = std::array<ConfigurationCensus, kMembers>;

Census empty_census(int n_bonds, std::uint32_t n_sites) {
  Census c;
  for (auto& m : c) m.assign(n_bonds + 1, std::vector<std::uint64_t>(n_sites + 1, 0));
  return c;
}

void check_graph(const SmallGraph& g) {
  validate(g);
  if (static_cast<int>(g.bonds.size()) > kMaxEnumerationBonds) {
    std::ostringstream msg;
    msg << "enumerate_partition_set: " << g.bonds.size() << " bonds exceeds the cap of " << kMaxEnumerationBonds;
    throw InvalidInput(msg.str());
  }
}

void enumerate_shard(const SmallGraph& g, std::uint64_t first, std::uint64_t last, Census& census) {
  const std::uint32_t n = g.n_sites;
  UnionFind uf;
  std::vector<std::uint8_t> flags(n);
  std::vector<std::uint8_t> in_arc(n, 0);
  for (auto s : g.gamma1) in_arc[s] |= 1;
  for (auto s : g.gamma2) in_arc[s] |= 2;
  for (std::uint64_t mask = first; mask < last; ++mask) {
    uf.reset(n);
    int open_bonds = 0;
    for (std::size_t b = 0; b < g.bonds.size(); ++b) {
      if ((mask >> b) & 1U) {
        uf.unite(g.bonds[b].first, g.bonds[b].second);
        ++open_bonds;
      }
    }
    std::fill(flags.begin(), flags.end(), 0);
    for (std::uint32_t s = 0; s < n; ++s) flags[uf.find(s)] |= in_arc[s] | 4;
    int n0 = 0, nl = 0, nr = 0, nc = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
      switch (flags[s]) {
        case 4: ++n0; break;
        case 5: ++nl; break;
        case 6: ++nr; break;
        case 7: ++nc; break;
        default: break;  // not a root
      }
    }
    auto& row = census;
    ++row[kFF][open_bonds][nc + nl + nr + n0];
    ++row[kAA][open_bonds][n0];
    ++row[kAF][open_bonds][nr + n0];
    ++row[kFA][open_bonds][nl + n0];
    if (nc == 0) ++row[kAB][open_bonds][n0];
  }
}

QPolynomial fold_in_p(const ConfigurationCensus& census, double p) {
  const int n_bonds = static_cast<int>(census.size()) - 1;
  const std::size_t width = census.empty() ? 0 : census[0].size();
  std::vector<double> coefficients(width, 0.0);
  for (int k = 0; k <= n_bonds; ++k) {
    const double weight = std::pow(p, k) * std::pow(1.0 - p, n_bonds - k);
    for (std::size_t j = 0; j < width; ++j) coefficients[j] += weight * static_cast<double>(census[k][j]);
  }
  return QPolynomial(std::move(coefficients));
}

}  // namespace

int QPolynomial::degree() const {
  for (int k = static_cast<int>(coefficients_.size()) - 1; k >= 0; --k) {
    if (coefficients_[k] != 0.0) return k;
  }
  return 0;
}

double QPolynomial::operator()(double q) const {
  double v = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) v = v * q + *it;
  return v;
}

double QPolynomial::derivative(double q) const {
  double v = 0.0;
  for (std::size_t k = coefficients_.size(); k-- > 1;) v = v * q + static_cast<double>(k) * coefficients_[k];
  return v;
}

PartitionSet enumerate_partition_set(const SmallGraph& graph, double p, int workers) {
  check_graph(graph);
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("enumerate_partition_set: p must lie in [0, 1]");
  const int n_bonds = static_cast<int>(graph.bonds.size());
  const std::uint64_t total = std::uint64_t{1} << n_bonds;

  std::vector<Census> shards(kShards, empty_census(n_bonds, graph.n_sites));
  std::atomic<int> next{0};
  const auto work = [&] {
    for (int s = next++; s < kShards; s = next++) {
      enumerate_shard(graph, total * s / kShards, total * (s + 1) / kShards, shards[s]);
    }
  };
  const int w = std::clamp(workers, 1, kShards);
  if (w == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < w; ++i) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }

  Census merged = empty_census(n_bonds, graph.n_sites);
  for (const auto& shard : shards) {
    for (int m = 0; m < kMembers; ++m) {
      for (int k = 0; k <= n_bonds; ++k) {
        for (std::size_t j = 0; j < merged[m][k].size(); ++j) merged[m][k][j] += shard[m][k][j];
      }
    }
  }

  PartitionSet ps;
  ps.p = p;
  ps.n_bonds = n_bonds;
  ps.z_ff = fold_in_p(merged[kFF], p);
  ps.z_aa = fold_in_p(merged[kAA], p);
  ps.z_ab = fold_in_p(merged[kAB], p);
  ps.z_af = fold_in_p(merged[kAF], p);
  ps.z_fa = fold_in_p(merged[kFA], p);
  ps.census_ff = std::move(merged[kFF]);
  ps.census_aa = std::move(merged[kAA]);
  ps.census_ab = std::move(merged[kAB]);
  ps.census_af = std::move(merged[kAF]);
  ps.census_fa = std::move(merged[kFA]);
  return ps;
}

double crossing_prob_exact(const PartitionSet& ps) { return ps.z_aa(1.0) - ps.z_ab(1.0); }

double mean_crossing_exact(const PartitionSet& ps) {
  return ps.z_ff.derivative(1.0) + ps.z_aa.derivative(1.0) - ps.z_fa.derivative(1.0) - ps.z_af.derivative(1.0);
}

double mean_crossing_product_form(const PartitionSet& ps) {
  const double ff = ps.z_ff(1.0), aa = ps.z_aa(1.0), fa = ps.z_fa(1.0), af = ps.z_af(1.0);
  const double ratio = ff * aa / (fa * af);
  const double log_derivative = ps.z_ff.derivative(1.0) / ff + ps.z_aa.derivative(1.0) / aa -
                                ps.z_fa.derivative(1.0) / fa - ps.z_af.derivative(1.0) / af;
  return ratio * log_derivative;
}

bool sums_to_one_exactly(const ConfigurationCensus& census, int n_bonds) {
  if (static_cast<int>(census.size()) != n_bonds + 1) return false;
  std::uint64_t binomial = 1;  // C(B, k)
  for (int k = 0; k <= n_bonds; ++k) {
    std::uint64_t total = 0;
    for (auto c : census[k]) total += c;
    if (total != binomial) return false;
    binomial = binomial * static_cast<std::uint64_t>(n_bonds - k) / static_cast<std::uint64_t>(k + 1);
  }
  return true;
}

DirectCensus direct_crossing_census(const SmallGraph& g, double p) {
  check_graph(g);
  const std::uint32_t n = g.n_sites;
  const int n_bonds = static_cast<int>(g.bonds.size());
  std::vector<std::uint8_t> in_first(n, 0), in_second(n, 0);
  for (auto s : g.gamma1) in_first[s] = 1;
  for (auto s : g.gamma2) in_second[s] = 1;

  std::vector<std::vector<std::uint32_t>> adjacency(n);
  std::vector<int> label(n);
  std::vector<std::uint32_t> stack;
  DirectCensus out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_bonds); ++mask) {
    for (auto& a : adjacency) a.clear();
    int open_bonds = 0;
    for (int b = 0; b < n_bonds; ++b) {
      if ((mask >> b) & 1U) {
        adjacency[g.bonds[b].first].push_back(g.bonds[b].second);
        adjacency[g.bonds[b].second].push_back(g.bonds[b].first);
        ++open_bonds;
      }
    }
    std::fill(label.begin(), label.end(), -1);
    int crossing = 0;
    for (std::uint32_t start = 0; start < n; ++start) {
      if (label[start] >= 0) continue;
      bool hits_first = false, hits_second = false;
      label[start] = static_cast<int>(start);
      stack.assign(1, start);
      while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        hits_first = hits_first || in_first[u];
        hits_second = hits_second || in_second[u];
        for (auto v : adjacency[u]) {
          if (label[v] < 0) {
            label[v] = static_cast<int>(start);
            stack.push_back(v);
          }
        }
      }
      if (hits_first && hits_second) ++crossing;
    }
    const double weight = std::pow(p, open_bonds) * std::pow(1.0 - p, n_bonds - open_bonds);
    if (crossing > 0) out.p_cross += weight;
    out.mean_nc += weight * crossing;
  }
  return out;
}

SmallGraph square_grid_graph(int nx, int ny) {
  LatticeSpec spec;
  spec.kind = LatticeKind::square_bond;
  spec.shape = Shape::rectangle;
  spec.nx = nx;
  spec.ny = ny;
  spec.gamma1 = {Side::left};
  spec.gamma2 = {Side::right};
  return build_lattice(spec).graph;
}

SmallGraph single_bond_graph() {
  SmallGraph g;
  g.n_sites = 2;
  g.bonds = {{0, 1}};
  g.gamma1 = {0};
  g.gamma2 = {1};
  return g;
}

}  // namespace perc
