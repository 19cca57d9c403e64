#pragma once

// Lattice geometry: turns a LatticeSpec into an explicit graph with two
// boundary arcs.  Shared by the Monte Carlo engine and the CLI.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace perc {

enum class LatticeKind { square_bond, triangular_site };
enum class Shape { rectangle, equilateral_triangle, periodic_strip };

/// Sides of a rectangle or strip (left/right/bottom/top) and of the
/// equilateral triangle ABC (ab/bc/ac).
enum class Side { left, right, bottom, top, ab, bc, ac };

/// A run of consecutive boundary sites: positions [begin, end) along a side.
/// end < 0 means "to the end of the side".
///
/// Positions on the triangle run from A along AB and AC, and from C along BC,
/// so a segment XC of BC is always the prefix [0, m).
struct Arc {
  Side side = Side::left;
  int begin = 0;
  int end = -1;
};

struct LatticeSpec {
  LatticeKind kind = LatticeKind::triangular_site;
  Shape shape = Shape::rectangle;
  int nx = 1;  // columns; sites per side for the triangle; periodic width for the strip
  int ny = 1;  // rows; ignored for the triangle
  double p = 0.5;
  Arc gamma1{Side::left};
  Arc gamma2{Side::right};
};

using Bond = std::pair<std::uint32_t, std::uint32_t>;

/// Sites, bonds and two disjoint boundary arcs.
struct BoundaryGraph {
  std::uint32_t n_sites = 0;
  std::vector<Bond> bonds;
  std::vector<std::uint32_t> gamma1;
  std::vector<std::uint32_t> gamma2;
};

/// Percolation lives on bonds (every site present) or on sites (every bond
/// between two open sites present).
enum class Occupation { bonds, sites };

struct Lattice {
  Occupation occupation = Occupation::bonds;
  BoundaryGraph graph;
  double effective_aspect_ratio = 0.0;
};

/// Throws InvalidInput if the graph has out-of-range sites, self loops or
/// overlapping arcs.
void validate(const BoundaryGraph& graph);

/// Throws InvalidInput for inconsistent shapes, sizes, p or arcs.
void validate(const LatticeSpec& spec);

/// Number of boundary sites along a side of the spec's shape.
int side_length(const LatticeSpec& spec, Side side);

/// Site indices covered by an arc, in order along the side.
std::vector<std::uint32_t> arc_sites(const LatticeSpec& spec, const Arc& arc);

Lattice build_lattice(const LatticeSpec& spec);

/// Bond percolation on an explicit graph.
Lattice lattice_from_graph(BoundaryGraph graph);

/// Continuum width/height of the lattice region.  For the rectangle this is
/// the aspect ratio r of the left-right crossing; for the periodic strip it is
/// circumference over height, W/L.
///   square_bond:     rectangle (nx - 1) / ny,  strip nx / (ny - 1)
///   triangular_site: nx / ((ny - 1) sqrt(3)/2)   (rows are sqrt(3)/2 apart)
/// The square-bond rectangle value makes the self-dual (n+1) x n site grid
/// exactly r = 1.  Returns NaN for the triangle.
double effective_aspect_ratio(const LatticeSpec& spec);

std::string to_string(LatticeKind kind);
std::string to_string(Shape shape);
std::string to_string(Side side);
LatticeKind lattice_kind_from_string(const std::string& s);
Shape shape_from_string(const std::string& s);
Side side_from_string(const std::string& s);

}  // namespace perc
