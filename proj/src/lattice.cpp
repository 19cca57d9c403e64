#include "perc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "perc/errors.hpp"

namespace perc {
namespace {

std::uint32_t grid_index(const LatticeSpec& s, int i, int j) { return static_cast<std::uint32_t>(j * s.nx + i); }

// Axial coordinates (i, j), i + j <= n - 1; row j holds n - j sites.
std::uint32_t triangle_index(int n, int i, int j) {
  const int before = j * n - j * (j - 1) / 2;
  return static_cast<std::uint32_t>(before + i);
}

bool is_triangle_side(Side s) { return s == Side::ab || s == Side::bc || s == Side::ac; }

std::uint32_t site_on_side(const LatticeSpec& s, Side side, int pos) {
  if (s.shape == Shape::equilateral_triangle) {
    const int n = s.nx;
    switch (side) {
      case Side::ab: return triangle_index(n, pos, 0);
      case Side::bc: return triangle_index(n, pos, n - 1 - pos);
      case Side::ac: return triangle_index(n, 0, pos);
      default: break;
    }
  } else {
    switch (side) {
      case Side::left: return grid_index(s, 0, pos);
      case Side::right: return grid_index(s, s.nx - 1, pos);
      case Side::bottom: return grid_index(s, pos, 0);
      case Side::top: return grid_index(s, pos, s.ny - 1);
      default: break;
    }
  }
  throw InvalidInput("side " + to_string(side) + " does not belong to shape " + to_string(s.shape));
}

void add_square_bonds(const LatticeSpec& s, std::vector<Bond>& bonds) {
  const bool periodic = s.shape == Shape::periodic_strip;
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      if (i + 1 < s.nx) {
        bonds.emplace_back(grid_index(s, i, j), grid_index(s, i + 1, j));
      } else if (periodic) {
        bonds.emplace_back(grid_index(s, i, j), grid_index(s, 0, j));
      }
      if (j + 1 < s.ny) bonds.emplace_back(grid_index(s, i, j), grid_index(s, i, j + 1));
    }
  }
}

// Rows of a triangular lattice, odd rows shifted right by half a spacing.
void add_triangular_grid_bonds(const LatticeSpec& s, std::vector<Bond>& bonds) {
  const bool periodic = s.shape == Shape::periodic_strip;
  const auto wrap = [&](int i) { return (i + s.nx) % s.nx; };
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      const std::uint32_t here = grid_index(s, i, j);
      if (i + 1 < s.nx) {
        bonds.emplace_back(here, grid_index(s, i + 1, j));
      } else if (periodic) {
        bonds.emplace_back(here, grid_index(s, 0, j));
      }
      if (j + 1 >= s.ny) continue;
      bonds.emplace_back(here, grid_index(s, i, j + 1));
      const int diagonal = (j % 2 == 0) ? i - 1 : i + 1;
      if (diagonal >= 0 && diagonal < s.nx) {
        bonds.emplace_back(here, grid_index(s, diagonal, j + 1));
      } else if (periodic) {
        bonds.emplace_back(here, grid_index(s, wrap(diagonal), j + 1));
      }
    }
  }
}

void add_triangle_bonds(int n, std::vector<Bond>& bonds) {
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i + j < n; ++i) {
      const std::uint32_t here = triangle_index(n, i, j);
      if (i + 1 + j < n) {
        bonds.emplace_back(here, triangle_index(n, i + 1, j));
        bonds.emplace_back(here, triangle_index(n, i, j + 1));
        bonds.emplace_back(triangle_index(n, i + 1, j), triangle_index(n, i, j + 1));
      }
    }
  }
}

}  // namespace

void validate(const BoundaryGraph& g) {
  for (const auto& [u, v] : g.bonds) {
    if (u >= g.n_sites || v >= g.n_sites) throw InvalidInput("bond endpoint out of range");
    if (u == v) throw InvalidInput("self-loop bond");
  }
  std::vector<std::uint8_t> in_first(g.n_sites, 0);
  for (auto s : g.gamma1) {
    if (s >= g.n_sites) throw InvalidInput("gamma1 site out of range");
    in_first[s] = 1;
  }
  for (auto s : g.gamma2) {
    if (s >= g.n_sites) throw InvalidInput("gamma2 site out of range");
    if (in_first[s]) throw InvalidInput("boundary arcs gamma1 and gamma2 overlap");
  }
}

int side_length(const LatticeSpec& s, Side side) {
  if (s.shape == Shape::equilateral_triangle) {
    if (!is_triangle_side(side)) throw InvalidInput("triangle arcs must use sides ab, bc or ac");
    return s.nx;
  }
  if (is_triangle_side(side)) throw InvalidInput("side " + to_string(side) + " needs the equilateral_triangle shape");
  if (side == Side::left || side == Side::right) {
    if (s.shape == Shape::periodic_strip) throw InvalidInput("the periodic strip has no left/right sides");
    return s.ny;
  }
  return s.nx;
}

std::vector<std::uint32_t> arc_sites(const LatticeSpec& s, const Arc& arc) {
  const int len = side_length(s, arc.side);
  const int end = arc.end < 0 ? len : arc.end;
  if (arc.begin < 0 || arc.begin > end || end > len) {
    std::ostringstream msg;
    msg << "arc [" << arc.begin << ", " << arc.end << ") does not fit side " << to_string(arc.side)
        << " of length " << len;
    throw InvalidInput(msg.str());
  }
  std::vector<std::uint32_t> sites;
  sites.reserve(static_cast<std::size_t>(end - arc.begin));
  for (int pos = arc.begin; pos < end; ++pos) sites.push_back(site_on_side(s, arc.side, pos));
  return sites;
}

void validate(const LatticeSpec& s) {
  if (s.nx < 1 || s.ny < 1) throw InvalidInput("lattice sizes nx, ny must be >= 1");
  if (!(s.p >= 0.0 && s.p <= 1.0)) throw InvalidInput("occupation probability p must lie in [0, 1]");
  if (s.shape == Shape::equilateral_triangle && s.kind != LatticeKind::triangular_site) {
    throw InvalidInput("the equilateral triangle is only built on the triangular site lattice");
  }
  if (s.shape == Shape::periodic_strip && s.nx < 3) throw InvalidInput("periodic strip needs nx >= 3");
  if (static_cast<double>(s.nx) * s.ny >= static_cast<double>(std::numeric_limits<std::uint32_t>::max() / 2)) {
    throw InvalidInput("lattice too large");
  }
  const auto a = arc_sites(s, s.gamma1);
  const auto b = arc_sites(s, s.gamma2);
  for (auto x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) throw InvalidInput("boundary arcs gamma1 and gamma2 overlap");
  }
}

double effective_aspect_ratio(const LatticeSpec& s) {
  const double row_spacing = std::numbers::sqrt3 / 2.0;
  switch (s.shape) {
    case Shape::equilateral_triangle:
      return std::numeric_limits<double>::quiet_NaN();
    case Shape::rectangle:
      if (s.kind == LatticeKind::square_bond) return static_cast<double>(s.nx - 1) / s.ny;
      return s.nx / ((s.ny - 1) * row_spacing);
    case Shape::periodic_strip:
      if (s.kind == LatticeKind::square_bond) return static_cast<double>(s.nx) / (s.ny - 1);
      return s.nx / ((s.ny - 1) * row_spacing);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Lattice build_lattice(const LatticeSpec& s) {
  validate(s);
  Lattice lat;
  auto& g = lat.graph;
  if (s.shape == Shape::equilateral_triangle) {
    g.n_sites = static_cast<std::uint32_t>(s.nx * (s.nx + 1) / 2);
    add_triangle_bonds(s.nx, g.bonds);
  } else {
    g.n_sites = static_cast<std::uint32_t>(s.nx * s.ny);
    if (s.kind == LatticeKind::square_bond) {
      add_square_bonds(s, g.bonds);
    } else {
      add_triangular_grid_bonds(s, g.bonds);
    }
  }
  lat.occupation = s.kind == LatticeKind::square_bond ? Occupation::bonds : Occupation::sites;
  g.gamma1 = arc_sites(s, s.gamma1);
  g.gamma2 = arc_sites(s, s.gamma2);
  lat.effective_aspect_ratio = effective_aspect_ratio(s);
  return lat;
}

Lattice lattice_from_graph(BoundaryGraph graph) {
  validate(graph);
  Lattice lat;
  lat.occupation = Occupation::bonds;
  lat.graph = std::move(graph);
  lat.effective_aspect_ratio = std::numeric_limits<double>::quiet_NaN();
  return lat;
}

std::string to_string(LatticeKind kind) {
  return kind == LatticeKind::square_bond ? "square_bond" : "triangular_site";
}

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::rectangle: return "rectangle";
    case Shape::equilateral_triangle: return "equilateral_triangle";
    case Shape::periodic_strip: return "periodic_strip";
  }
  return "?";
}

std::string to_string(Side side) {
  switch (side) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::bottom: return "bottom";
    case Side::top: return "top";
    case Side::ab: return "ab";
    case Side::bc: return "bc";
    case Side::ac: return "ac";
  }
  return "?";
}

LatticeKind lattice_kind_from_string(const std::string& s) {
  if (s == "square_bond") return LatticeKind::square_bond;
  if (s == "triangular_site") return LatticeKind::triangular_site;
  throw InvalidInput("unknown lattice kind '" + s + "'");
}

Shape shape_from_string(const std::string& s) {
  if (s == "rectangle") return Shape::rectangle;
  if (s == "equilateral_triangle") return Shape::equilateral_triangle;
  if (s == "periodic_strip") return Shape::periodic_strip;
  throw InvalidInput("unknown shape '" + s + "'");
}

Side side_from_string(const std::string& s) {
  for (Side side : {Side::left, Side::right, Side::bottom, Side::top, Side::ab, Side::bc, Side::ac}) {
    if (to_string(side) == s) return side;
  }
  throw InvalidInput("unknown side '" + s + "'");
}

}  // namespace perc
