#ifndef GEOTRI_CONING_HPP
#define GEOTRI_CONING_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geotri/hypgeom.hpp"
#include "geotri/triangulation.hpp"

namespace geotri {
namespace coning {

using hypgeom::Complex;

// ideal point on the sphere at infinity, in upper half-space coordinates
struct IdealPoint {
  bool inf = false;
  Complex z{0.0, 0.0};

  static IdealPoint infinity() { return {true, Complex(0.0, 0.0)}; }
  static IdealPoint at(Complex w) { return {false, w}; }
  bool operator==(const IdealPoint& o) const { return inf == o.inf && (inf || z == o.z); }
};

// One ideal polyhedron: cusp label per vertex, optional positions, faces as
// cyclic vertex sequences.
struct Polyhedron {
  std::vector<int> cusp;
  std::vector<IdealPoint> pos;  // empty, or one entry per vertex
  std::vector<std::vector<int>> faces;

  int vertex_count() const { return int(cusp.size()); }
  bool has_positions() const { return !pos.empty(); }
  // whether {a, b} appears as consecutive vertices of some face
  bool has_edge(int a, int b) const;
};

// Identification of face face_a of cell_a with face face_b of cell_b;
// position i on the a-cycle is glued to position vmap[i] on the b-cycle.
struct FaceGluing {
  int cell_a = -1, face_a = -1;
  int cell_b = -1, face_b = -1;
  std::vector<int> vmap;
};

struct PolyComplex {
  std::vector<Polyhedron> cells;
  std::vector<FaceGluing> gluings;

  // combinatorial validity: every edge of a cell lies in exactly two of its
  // faces, gluings are adjacency-preserving bijections between faces of
  // matching size with matching cusp labels, no face glued twice
  void validate() const;
};

// Strict partial order on cusp labels, stored transitively closed.
struct CuspOrder {
  std::map<int, std::set<int>> above;  // a -> { b : a < b }

  bool lt(int a, int b) const;

  // builds the closure; fails InconsistentInput on a cycle
  static CuspOrder from_edges(const std::vector<std::pair<int, int>>& edges);
  static CuspOrder total(const std::vector<int>& chain);
  // the chain is totally ordered and lies below the pairwise-incomparable
  // blue labels
  static CuspOrder blue(const std::vector<int>& chain, const std::vector<int>& blue);
};

// The unique minimal vertex of the cell's cusp labels, or nullopt when the
// minimum is not unique (incomparable minima, or a repeated minimal label).
std::optional<int> minimal_vertex(const Polyhedron& p, const CuspOrder& o);
// the same, restricted to a subset of the vertices
std::optional<int> minimal_vertex(const Polyhedron& p, const std::vector<int>& subset,
                                  const CuspOrder& o);

// A pyramid of the refined decomposition: apex coned over a (part of a)
// face of the source cell.  base.size() == 3 for the tetrahedra produced by
// the second coning stage; base.size() >= 4 only for undivided faces with
// no unique minimal vertex.
struct Pyramid {
  int cell = -1;
  int apex = -1;
  int base_face = -1;
  std::vector<int> base;  // cyclic, in source-cell vertex indices
};

// Face-consistency audit of one gluing (the two cases of the subdivision
// agreement argument).
struct FaceCase {
  int gluing = -1;
  int kase = 0;       // 1: face undivided; 2: face coned from w
  int w_a = -1, w_b = -1;  // case 2: the minimal vertex on either side
};

struct PyramidDecomposition {
  PolyComplex source;
  std::vector<Pyramid> pyramids;
  std::vector<FaceCase> face_cases;
};

// Two-stage coning of every cell: first from the cell's unique minimal
// vertex, then each pyramid from the unique minimal vertex of its base when
// it exists.  Checks that shared faces subdivide consistently from both
// sides.
PyramidDecomposition iterated_cone(const PolyComplex& c, const CuspOrder& o);

// Triangulates the leftover non-triangular pyramid bases (each shared by
// exactly two pyramids, forming a bipyramid) and converts to a
// triangulation-module object.  choice maps (cell, face) of a non-triangular
// face to the corner of its cycle the face is fanned from (default 0);
// either side of a glued face may be named.
tri::IdealTriangulation choose_diagonals(
    const PyramidDecomposition& pd,
    const std::map<std::pair<int, int>, int>& choice = {});

// Diagonals of a cell joining two vertices in the same cusp.
struct ReturningDiagonal {
  int cell = -1;
  int a = -1, b = -1;
};

// All unordered non-edge vertex pairs within a cell with equal cusp labels.
std::vector<ReturningDiagonal> returning_diagonals(const PolyComplex& c);

void write_complex(const PolyComplex& c, std::ostream& out);
PolyComplex read_complex(std::istream& in);
// order file: one "a < b" edge per line
void write_order(const CuspOrder& o, std::ostream& out);
CuspOrder read_order(std::istream& in);

}  // namespace coning
}  // namespace geotri

#endif
