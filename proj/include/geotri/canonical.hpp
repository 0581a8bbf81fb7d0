#ifndef GEOTRI_CANONICAL_HPP
#define GEOTRI_CANONICAL_HPP

#include <string>
#include <vector>

#include "geotri/ananas.hpp"
#include "geotri/hypgeom.hpp"

namespace geotri {
namespace canonical {

using ananas::CuspLattice;
using ananas::LatticeVec;
using hypgeom::Complex;

// Horoball packing seen from the cusp at infinity: unit-diameter horoballs
// tangent to the plane at the lattice points, plus the horoball z >= full_height.
struct PackingScene {
  CuspLattice lattice;
  double full_height = 0.0;   // e^{l + t}
  double ball_diameter = 1.0;

  // length of the shortest lattice vector
  double w() const;
};

// The maximal ball resting on the lattice horoballs and tangent to the
// horoball at infinity.  Tangency to the horoball at p means
// |center - (p, d/2)| = radius + d/2.
struct RestingBall {
  Complex center;     // horizontal coordinate
  double height = 0.0;
  double radius = 0.0;
  std::vector<LatticeVec> tangencies;   // 3, or 4 iff the lattice is rectangular
  std::vector<double> residuals;        // per-tangency |distance - sum of radii|
  // signed clearance of the nearest non-tangent horoball (small positive for
  // nearly-rectangular lattices; callers can audit borderline classifications)
  double fourth_residual = 0.0;
};

RestingBall resting_ball(const PackingScene& s, double tol = 1e-9);
// whether full_height is large enough for resting_ball to succeed
bool resting_regime_reached(const PackingScene& s, double tol = 1e-9);

// One cell of the Delaunay cellulation of the cusp torus.
struct CuspCell {
  std::vector<LatticeVec> corners;  // ccw
  std::vector<Complex> vertices;    // planar positions of the corners
  Complex circumcenter;
  double circumradius = 0.0;
};

// Two isometric acute triangles, or a single rectangle.
struct CuspCellulation {
  bool rectangular = false;
  std::vector<CuspCell> cells;
};

CuspCellulation cusp_cellulation(const CuspLattice& lattice, double tol = 1e-9);

// covering radius of the lattice = largest Delaunay circumradius
double covering_radius(const CuspLattice& lattice);

// Critical diameter h below which no ball can rest on two diameter-h
// horoballs whose tangency points are >= w apart (forcing Euclidean radius
// >= w^2/(8h)) while staying disjoint from the unit-diameter lattice
// horoballs (admitting radius at most mu^2/2 at a deep hole).
double critical_diameter(double w, double mu);

// distance bound L(l) = l - log h_crit; satisfies L(l + t) = L(l) + t
double problematic_bound(double ell, const CuspLattice& lattice);

// The ananas dual to the resting-ball vertex.  In the rectangular case the
// cell is a pyramid over the rectangle and the recorded diagonal (the +1/1
// choice) is free.
struct ExtractedAnanas {
  ananas::DrilledAnanasState state;
  bool free_diagonal = false;
};

ExtractedAnanas extract_ananas(const PackingScene& s, double tol = 1e-9);

// side view of the packing: lattice horoballs, resting ball, infinity plane
std::string horoball_svg(const PackingScene& s);

}  // namespace canonical
}  // namespace geotri

#endif
