#ifndef GEOTRI_ANANAS_HPP
#define GEOTRI_ANANAS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "geotri/farey.hpp"
#include "geotri/hypgeom.hpp"
#include "geotri/triangulation.hpp"

namespace geotri {
namespace ananas {

using farey::Int;
using hypgeom::Complex;
using hypgeom::ShapeParameter;

// Modulus of the cusp lattice Z + Z*omega, kept in the reduced fundamental
// domain |Re| <= 1/2, |omega| >= 1 of the modular group.
struct CuspLattice {
  Complex omega;

  static CuspLattice reduce(Complex omega, double tol = 1e-9);
  // an orthogonal basis exists iff Re omega = 0; rhombic lattices
  // (|Re| = 1/2) count as non-rectangular
  bool rectangular(double tol = 1e-9) const { return std::abs(omega.real()) <= tol; }
};

// The lattice point m + n*omega.  Entries grow like Fibonacci numbers along
// tree paths, hence arbitrary precision.
struct LatticeVec {
  Int m, n;

  LatticeVec() : m(0), n(0) {}
  LatticeVec(Int mm, Int nn) : m(std::move(mm)), n(std::move(nn)) {}
  LatticeVec operator+(const LatticeVec& o) const { return {m + o.m, n + o.n}; }
  LatticeVec operator-(const LatticeVec& o) const { return {m - o.m, n - o.n}; }
  LatticeVec operator-() const { return {-m, -n}; }
  bool operator==(const LatticeVec& o) const { return m == o.m && n == o.n; }
};

// slope of the primitive vector m + n*omega (the curve class it represents)
farey::Slope slope_of(const LatticeVec& v);
// det(a, b) = a.m b.n - a.n b.m; Im(b/a) > 0 iff det > 0
Int vec_det(const LatticeVec& a, const LatticeVec& b);
// planar position of v in the basis (1, omega), or (1, omega - 1) when
// Re omega > 0; the basis making (0/1, 1/0, 1/1) the Delaunay base triangle
Complex lattice_position(const LatticeVec& v, const CuspLattice& lat);

// One peel step: the tetrahedron cut off between two successive pleated
// boundaries, recorded as the quad cycle (q0,q1,q2,q3) whose removed
// diagonal is (q0,q2); slots in this order give a geometric shape.
struct PeelRecord {
  std::array<LatticeVec, 4> quad;
  ShapeParameter shape;
  farey::Slope peeled;   // the boundary slope whose edge was exchanged
  farey::Slope created;  // the new diagonal (forbidden for the next step)
};

// One node of the tree: the sub-ananas N_i together with the peeled layers
// above it.  The pleating of N_i is the pair of triangles (0, w1, w1+w2),
// (0, w1+w2, w2); the orientation invariant is det(w1, w2) = +1.
struct DrilledAnanasState {
  CuspLattice lattice;
  LatticeVec w1, w2;
  std::optional<farey::Slope> forbidden;
  std::vector<PeelRecord> peeled;

  LatticeVec diagonal() const { return w1 + w2; }
  // slopes (of w1, of w2, of the diagonal)
  farey::FareyTriangle triangle() const;
  // shapes of the two core cells T = (inf, 0, w1, d), T' = (inf, 0, d, w2)
  ShapeParameter core_shape_1() const;
  ShapeParameter core_shape_2() const;
  double core_volume() const;
};

// Realizes the boundary triangulation given by a Farey triangle on the
// lattice torus; the triangle's mediant vertex becomes the pleating
// diagonal (in the rectangular case, passing (0/1,1/0,1/1) or
// (0/1,1/0,-1/1) selects between the two diagonals).
DrilledAnanasState build(const CuspLattice& lattice, const farey::FareyTriangle& triangle);

// Internal boundary angles (2*theta_i), indexed like triangle(); sum 2*pi.
std::array<double, 3> boundary_angles(const DrilledAnanasState& a);

// Diagonal exchange removing the boundary edge of slope s.
std::pair<ShapeParameter, DrilledAnanasState> peel(const DrilledAnanasState& a,
                                                   const farey::Slope& s, double tol = 1e-9);

// The triangulation of N_0 at this node: peeled layers plus the two cones,
// glued by exact lattice translation matching.  Cusp 0 is the torus cusp at
// infinity, cusp 1 the thorn.
tri::IdealTriangulation to_triangulation(const DrilledAnanasState& a);

// Walks the tree by the farey-module L/R convention (on the start node the
// allowed peels are triangle().s[0] and triangle().s[1]; R peels the slope
// creating the larger new diagonal).  Returns the states after each turn,
// start node included.
std::vector<DrilledAnanasState> tree_walk(const DrilledAnanasState& a0,
                                          const std::string& turns, double tol = 1e-9);

// A finite-index sublattice spanned by the columns of an integer matrix.
struct AnanasCover {
  long a = 1, b = 0, c = 0, d = 1;  // columns (a, b), (c, d) in the (1, omega) basis
  long degree() const { return a * d - b * c < 0 ? -(a * d - b * c) : a * d - b * c; }
};

// Lifts to_triangulation(a) to the cover; cells are indexed by coset, the
// thorn splits into degree() cusps (labels 1 + coset), and the deck action
// permutes the cells by translation.
tri::IdealTriangulation lift_to_cover(const DrilledAnanasState& a, const AnanasCover& c);

// cusp cellulation figure: lattice points, pleating triangle edges,
// circumcircles (SVG 1.1)
std::string cellulation_svg(const DrilledAnanasState& a);

}  // namespace ananas
}  // namespace geotri

#endif
