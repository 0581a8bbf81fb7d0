#ifndef GEOTRI_TRIANGULATION_HPP
#define GEOTRI_TRIANGULATION_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geotri/hypgeom.hpp"

namespace geotri {
namespace tri {

using hypgeom::Complex;
using hypgeom::ShapeParameter;

// Permutation of the four vertex slots of a tetrahedron.
struct Perm4 {
  std::array<int, 4> img{0, 1, 2, 3};

  static Perm4 identity() { return Perm4{}; }
  int operator()(int i) const { return img[i]; }
  Perm4 inverse() const;
  // (a * b)(i) = a(b(i))
  Perm4 operator*(const Perm4& o) const;
  bool operator==(const Perm4& o) const { return img == o.img; }
  bool is_permutation() const;
};

// Face f of a cell is the face opposite vertex slot f.
struct Gluing {
  int cell = -1;  // -1: boundary face
  int face = -1;
  // full 4-permutation carrying this cell's slots to the neighbor's;
  // perm(f) = neighbor face when this is the gluing of face f
  Perm4 perm;

  bool is_boundary() const { return cell < 0; }
  static Gluing boundary() { return Gluing{}; }
};

struct Tetrahedron {
  std::array<Gluing, 4> glue;
  std::array<int, 4> cusp{0, 0, 0, 0};  // cusp label per vertex slot
  std::optional<ShapeParameter> shape;
};

// An (unoriented) edge of a cell, by its two vertex slots.
struct CellEdge {
  int cell, a, b;  // a < b
  CellEdge(int c, int x, int y) : cell(c), a(std::min(x, y)), b(std::max(x, y)) {}
  bool operator==(const CellEdge& o) const { return cell == o.cell && a == o.a && b == o.b; }
};

struct EdgeClass {
  std::vector<CellEdge> edges;
  bool interior = true;  // false if some face containing a member is unglued
};

struct VertexClass {
  std::vector<std::pair<int, int>> vertices;  // (cell, slot)
  int cusp = -1;
};

class IdealTriangulation {
public:
  std::vector<Tetrahedron> cells;

  int size() const { return int(cells.size()); }
  bool has_shapes() const;

  // structural validation: permutation sanity, gluing involution, cusp-label
  // consistency across vertex classes; throws on failure
  void validate() const;

  std::vector<EdgeClass> edge_classes() const;
  std::vector<VertexClass> vertex_classes() const;
  int face_count() const;  // face classes (glued pairs count once)
  // V - E + F - C of the ideal complex
  int euler_characteristic() const;

  double volume() const;  // requires shapes
};

// The dihedral angle of cell c at edge {a, b}: arg of the edge parameter,
// which is z for {01},{23}, 1/(1-z) for {02},{13}, (z-1)/z for {03},{12}.
Complex edge_parameter(const ShapeParameter& s, int a, int b);

struct EdgeReport {
  EdgeClass edge;
  double angle_sum = 0.0;
  Complex parameter_product{1.0, 0.0};
};

struct GeometricReport {
  bool pass = false;
  std::vector<int> nongeometric_cells;
  std::vector<EdgeReport> edges;
  std::string summary() const;
};

// Checks Im z > 0 per cell, 2*pi angle sums (and, in strict mode, complex
// parameter product 1) around interior edges; boundary edges only reported.
GeometricReport verify_geometric(const IdealTriangulation& t, double tol = 1e-9,
                                 bool strict = false);

struct PachnerSite {
  // 2-3: the face (cell, face); 3-2 and 4-4: the edge (cell, {a, b})
  int cell = 0;
  int face = -1;
  int edge_a = -1, edge_b = -1;

  static PachnerSite at_face(int cell, int face) { return {cell, face, -1, -1}; }
  static PachnerSite at_edge(int cell, int a, int b) { return {cell, -1, a, b}; }
};

// Pachner moves.  With shapes present the moves are geometric: a 2-3 move
// requires the bipyramid over the site face to be strictly convex, and a
// 4-4 move requires the re-diagonalized octahedron to stay geometric.
// force = true performs the combinatorial move and drops all shapes.
IdealTriangulation pachner_23(const IdealTriangulation& t, const PachnerSite& site,
                              bool force = false, double tol = 1e-9);
IdealTriangulation pachner_32(const IdealTriangulation& t, const PachnerSite& site,
                              bool force = false, double tol = 1e-9);
// diagonal = 0 or 1 selects which of the two other octahedron diagonals
// becomes the new central edge
IdealTriangulation pachner_44(const IdealTriangulation& t, const PachnerSite& site,
                              int diagonal = 0, bool force = false, double tol = 1e-9);

// Combinatorial isomorphism (cell relabeling + slot permutations commuting
// with the gluings); shapes and cusp labels ignored.
bool isomorphic(const IdealTriangulation& t1, const IdealTriangulation& t2);

void write_triangulation(const IdealTriangulation& t, std::ostream& out);
void write_triangulation(const IdealTriangulation& t, const std::string& path);
IdealTriangulation read_triangulation(std::istream& in);
IdealTriangulation read_triangulation_file(const std::string& path);

}  // namespace tri
}  // namespace geotri

#endif
