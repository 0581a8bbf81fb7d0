#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "geotri/coning.hpp"
#include "geotri/errors.hpp"
#include "geotri/hypgeom.hpp"
#include "geotri/triangulation.hpp"

using namespace geotri;
using namespace geotri::coning;
using hypgeom::Complex;

namespace {

// vol of the regular ideal octahedron, 8 * Lobachevsky(pi/4)
const double kOctVolume = 3.6638623767088760;

// regular ideal octahedron: poles infinity and 0, equator at the 4th roots
// of unity; vertex order (inf, 0, 1, i, -1, -i)
Polyhedron octahedron(const std::vector<int>& labels) {
  Polyhedron p;
  p.cusp = labels;
  p.pos = {IdealPoint::infinity(),       IdealPoint::at({0.0, 0.0}),
           IdealPoint::at({1.0, 0.0}),   IdealPoint::at({0.0, 1.0}),
           IdealPoint::at({-1.0, 0.0}),  IdealPoint::at({0.0, -1.0})};
  p.faces = {{0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 2},
             {1, 3, 2}, {1, 4, 3}, {1, 5, 4}, {1, 2, 5}};
  return p;
}

// the same octahedron carried through z -> 1 + i - z (so the two share the
// face with vertices at infinity, 1, i)
Polyhedron octahedron_mirror(const std::vector<int>& labels) {
  Polyhedron p = octahedron(labels);
  for (IdealPoint& q : p.pos)
    if (!q.inf) q.z = Complex(1.0, 1.0) - q.z;
  return p;
}

PolyComplex two_octahedra(const std::vector<int>& la, const std::vector<int>& lb) {
  PolyComplex c;
  c.cells.push_back(octahedron(la));
  c.cells.push_back(octahedron_mirror(lb));
  // A's face (0,2,3) carries (inf, 1, i); in B those points sit at vertices
  // 0, 3, 2 of the same face
  c.gluings.push_back({0, 0, 1, 0, {0, 2, 1}});
  return c;
}

// unit cube combinatorics, vertex v = x + 2y + 4z
Polyhedron cube(const std::vector<int>& labels) {
  Polyhedron p;
  p.cusp = labels;
  p.faces = {{0, 1, 3, 2}, {4, 5, 7, 6}, {0, 2, 6, 4},
             {1, 3, 7, 5}, {0, 1, 5, 4}, {2, 3, 7, 6}};
  return p;
}

int count_interior_valence4(const tri::IdealTriangulation& t, tri::EdgeClass& found) {
  int n = 0;
  for (const auto& e : t.edge_classes())
    if (e.interior && e.edges.size() == 4) {
      found = e;
      ++n;
    }
  return n;
}

}  // namespace

TEST_CASE("minimal vertex") {
  Polyhedron p = octahedron({0, 1, 2, 3, 4, 5});
  CuspOrder total = CuspOrder::total({0, 1, 2, 3, 4, 5});
  REQUIRE(minimal_vertex(p, total).has_value());
  CHECK(*minimal_vertex(p, total) == 0);
  CHECK(*minimal_vertex(p, {3, 2, 5}, total) == 2);  // subset: least label wins

  // two incomparable minima
  CuspOrder partial = CuspOrder::from_edges({{0, 2}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  CHECK_FALSE(minimal_vertex(p, partial).has_value());

  // a repeated minimal label is not a unique minimum
  Polyhedron q = octahedron({0, 0, 1, 2, 3, 4});
  CHECK_FALSE(minimal_vertex(q, total).has_value());

  // blue/non-blue: any cell with a non-blue vertex has a unique minimum
  CuspOrder blue = CuspOrder::blue({0, 1, 2}, {10, 11, 12, 13});
  Polyhedron r = octahedron({10, 11, 1, 12, 13, 10});
  CHECK(*minimal_vertex(r, blue) == 2);
  Polyhedron allblue = octahedron({10, 11, 12, 13, 10, 11});
  CHECK_FALSE(minimal_vertex(allblue, blue).has_value());
}

TEST_CASE("order construction") {
  CuspOrder o = CuspOrder::from_edges({{1, 2}, {2, 3}});
  CHECK(o.lt(1, 3));  // transitive closure
  CHECK_FALSE(o.lt(3, 1));
  CHECK_FALSE(o.lt(1, 1));
  CHECK_THROWS_AS(CuspOrder::from_edges({{1, 2}, {2, 3}, {3, 1}}), Error);

  CuspOrder b = CuspOrder::blue({0, 1}, {7, 8});
  CHECK(b.lt(0, 7));
  CHECK(b.lt(1, 8));
  CHECK_FALSE(b.lt(7, 8));
  CHECK_FALSE(b.lt(8, 7));
}

TEST_CASE("octahedron cones to four positively oriented tetrahedra") {
  PolyComplex c;
  c.cells.push_back(octahedron({0, 1, 2, 3, 4, 5}));
  CuspOrder o = CuspOrder::total({0, 1, 2, 3, 4, 5});
  PyramidDecomposition pd = iterated_cone(c, o);
  CHECK(pd.pyramids.size() == 4);
  for (const Pyramid& pyr : pd.pyramids) {
    CHECK(pyr.apex == 0);
    CHECK(pyr.base.size() == 3);
  }
  tri::IdealTriangulation t = choose_diagonals(pd);
  REQUIRE(t.size() == 4);
  for (const auto& cell : t.cells) {
    REQUIRE(cell.shape.has_value());
    CHECK(cell.shape->geometric());
  }
  CHECK(t.volume() == doctest::Approx(kOctVolume).epsilon(1e-12));
  // the axis edge from infinity to 0 is interior with angle sum 2 pi
  tri::GeometricReport rep = tri::verify_geometric(t);
  CHECK(rep.pass);
}

TEST_CASE("pyramid with n-gon base yields n-2 tetrahedra") {
  for (int n = 4; n <= 8; ++n) {
    Polyhedron p;
    p.cusp.push_back(0);  // apex, minimal
    std::vector<int> base;
    for (int i = 1; i <= n; ++i) {
      p.cusp.push_back(i);
      base.push_back(i);
    }
    p.faces.push_back(base);
    for (int i = 0; i < n; ++i) p.faces.push_back({0, base[i], base[(i + 1) % n]});
    PolyComplex c;
    c.cells.push_back(p);
    std::vector<int> chain;
    for (int i = 0; i <= n; ++i) chain.push_back(i);
    PyramidDecomposition pd = iterated_cone(c, CuspOrder::total(chain));
    CHECK(int(pd.pyramids.size()) == n - 2);
    CHECK(choose_diagonals(pd).size() == n - 2);
  }
}

TEST_CASE("two octahedra, total order: all tetrahedra, shared face case 2") {
  // B reuses the glued labels 0 (infinity), 2, 3 and brings fresh 6, 7, 8
  PolyComplex c = two_octahedra({0, 1, 2, 3, 4, 5}, {0, 6, 3, 2, 7, 8});
  CuspOrder o = CuspOrder::total({0, 1, 2, 3, 4, 5, 6, 7, 8});
  PyramidDecomposition pd = iterated_cone(c, o);
  CHECK(pd.pyramids.size() == 8);
  REQUIRE(pd.face_cases.size() == 1);
  CHECK(pd.face_cases[0].kase == 2);
  CHECK(pd.face_cases[0].w_a == 0);  // coned from the shared infinity vertex
  CHECK(pd.face_cases[0].w_b == 0);

  tri::IdealTriangulation t = choose_diagonals(pd);
  REQUIRE(t.size() == 8);
  for (const auto& cell : t.cells) {
    REQUIRE(cell.shape.has_value());
    CHECK(cell.shape->geometric());
  }
  CHECK(t.volume() == doctest::Approx(2.0 * kOctVolume).epsilon(1e-12));
  CHECK(tri::verify_geometric(t).pass);
  // the glued face is triangulated identically from both sides: some face of
  // an A-cell (0..3) is glued to a B-cell (4..7)
  int cross = 0;
  for (int i = 0; i < 4; ++i)
    for (int f = 0; f < 4; ++f)
      if (!t.cells[i].glue[f].is_boundary() && t.cells[i].glue[f].cell >= 4) ++cross;
  CHECK(cross == 1);  // the shared face is a single triangle from either side
}

TEST_CASE("two octahedra, incomparable shared face: case 1 both sides") {
  PolyComplex c = two_octahedra({0, 1, 2, 3, 4, 5}, {0, 6, 3, 2, 7, 8});
  // 1 below everything in A, 6 below everything in B; 0, 2, 3 incomparable
  CuspOrder o = CuspOrder::from_edges(
      {{1, 0}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {6, 0}, {6, 2}, {6, 3}, {6, 7}, {6, 8}});
  PyramidDecomposition pd = iterated_cone(c, o);
  CHECK(pd.pyramids.size() == 8);  // all bases are triangles regardless
  REQUIRE(pd.face_cases.size() == 1);
  CHECK(pd.face_cases[0].kase == 1);  // the shared face stays undivided

  tri::IdealTriangulation t = choose_diagonals(pd);
  REQUIRE(t.size() == 8);
  for (const auto& cell : t.cells) CHECK(cell.shape->geometric());
  CHECK(t.volume() == doctest::Approx(2.0 * kOctVolume).epsilon(1e-12));
  CHECK(tri::verify_geometric(t).pass);
}

TEST_CASE("no unique minimum error names the cell") {
  PolyComplex c;
  c.cells.push_back(octahedron({7, 7, 8, 9, 10, 11}));  // two minimal 7s
  try {
    iterated_cone(c, CuspOrder::total({7, 8, 9, 10, 11}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoUniqueMinimum);
    CHECK(std::string(e.what()).find("cell 0") != std::string::npos);
  }
}

TEST_CASE("doubled cube: square face stays undivided, diagonal choices give a 4-4 pair") {
  // labels 0..3 totally ordered below the pairwise-incomparable 4..7; the
  // shared square face carries exactly the blue labels
  PolyComplex c;
  c.cells.push_back(cube({0, 1, 2, 3, 4, 5, 7, 6}));
  c.cells.push_back(cube({0, 1, 2, 3, 4, 5, 7, 6}));
  c.gluings.push_back({0, 1, 1, 1, {0, 1, 2, 3}});  // face (4,5,7,6) to itself
  CuspOrder o = CuspOrder::blue({0, 1, 2, 3}, {4, 5, 6, 7});

  PyramidDecomposition pd = iterated_cone(c, o);
  // per cube: two square bases split into 2 tets each, plus the undivided
  // shared square as a pyramid
  CHECK(pd.pyramids.size() == 10);
  int quads = 0;
  for (const Pyramid& p : pd.pyramids) quads += p.base.size() == 4;
  CHECK(quads == 2);
  REQUIRE(pd.face_cases.size() == 1);
  CHECK(pd.face_cases[0].kase == 1);

  tri::IdealTriangulation t0 = choose_diagonals(pd, {{{0, 1}, 0}});
  tri::IdealTriangulation t1 = choose_diagonals(pd, {{{0, 1}, 1}});
  // naming the same face from the other side picks the same diagonal
  tri::IdealTriangulation t0b = choose_diagonals(pd, {{{1, 1}, 0}});
  CHECK(t0.size() == 12);
  CHECK(t1.size() == 12);
  CHECK(tri::isomorphic(t0, t0b));

  // the bipyramid over the shared square: its central diagonal is the only
  // interior valence-4 edge between blue cusps
  tri::EdgeClass diag;
  REQUIRE(count_interior_valence4(t0, diag) >= 1);
  tri::EdgeClass picked;
  int found = 0;
  for (const auto& e : t0.edge_classes()) {
    if (!e.interior || e.edges.size() != 4) continue;
    const auto& ce = e.edges[0];
    if (t0.cells[ce.cell].cusp[ce.a] >= 4 && t0.cells[ce.cell].cusp[ce.b] >= 4) {
      picked = e;
      ++found;
    }
  }
  REQUIRE(found == 1);
  const auto& ce = picked.edges[0];
  bool related = false;
  for (int d = 0; d < 2; ++d) {
    tri::IdealTriangulation moved =
        tri::pachner_44(t0, tri::PachnerSite::at_edge(ce.cell, ce.a, ce.b), d, true);
    if (tri::isomorphic(moved, t1)) related = true;
  }
  CHECK(related);
}

TEST_CASE("boundary non-triangular face is rejected") {
  PolyComplex c;
  c.cells.push_back(cube({0, 1, 2, 3, 4, 5, 7, 6}));  // unglued: every face boundary
  CuspOrder o = CuspOrder::blue({0, 1, 2, 3}, {4, 5, 6, 7});
  PyramidDecomposition pd = iterated_cone(c, o);
  try {
    choose_diagonals(pd);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentInput);
  }
}

TEST_CASE("returning diagonals") {
  PolyComplex distinct;
  distinct.cells.push_back(octahedron({0, 1, 2, 3, 4, 5}));
  CHECK(returning_diagonals(distinct).empty());

  PolyComplex repeated;
  repeated.cells.push_back(octahedron({0, 1, 7, 3, 7, 5}));  // 1 and i... -1 share a cusp
  auto ds = returning_diagonals(repeated);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].cell == 0);
  CHECK(ds[0].a == 2);
  CHECK(ds[0].b == 4);

  // rectangular-pyramid ananas cell: apex at the torus cusp, base square on
  // the thorn; both base diagonals return to the thorn
  Polyhedron pyr;
  pyr.cusp = {0, 1, 1, 1, 1};
  pyr.faces = {{1, 2, 3, 4}, {0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}};
  PolyComplex ananas;
  ananas.cells.push_back(pyr);
  auto ad = returning_diagonals(ananas);
  REQUIRE(ad.size() == 2);
  for (const auto& d : ad) {
    CHECK(pyr.cusp[d.a] == 1);
    CHECK(pyr.cusp[d.b] == 1);
  }
}

TEST_CASE("complex and order round-trip through text") {
  PolyComplex c = two_octahedra({0, 1, 2, 3, 4, 5}, {0, 6, 3, 2, 7, 8});
  std::stringstream ss;
  write_complex(c, ss);
  PolyComplex r = read_complex(ss);
  REQUIRE(r.cells.size() == c.cells.size());
  for (size_t i = 0; i < c.cells.size(); ++i) {
    CHECK(r.cells[i].cusp == c.cells[i].cusp);
    CHECK(r.cells[i].faces == c.cells[i].faces);
    REQUIRE(r.cells[i].pos.size() == c.cells[i].pos.size());
    for (size_t j = 0; j < c.cells[i].pos.size(); ++j)
      CHECK(r.cells[i].pos[j] == c.cells[i].pos[j]);
  }
  REQUIRE(r.gluings.size() == 1);
  CHECK(r.gluings[0].vmap == c.gluings[0].vmap);

  CuspOrder o = CuspOrder::blue({0, 1, 2}, {5, 6});
  std::stringstream os;
  write_order(o, os);
  CuspOrder ro = read_order(os);
  CHECK(ro.above == o.above);
  CHECK(ro.lt(0, 6));
  CHECK_FALSE(ro.lt(5, 6));
}

TEST_CASE("complex validation") {
  PolyComplex c;
  c.cells.push_back(octahedron({0, 1, 2, 3, 4, 5}));
  c.cells[0].faces.pop_back();  // leaves edges on a single face
  CHECK_THROWS_AS(c.validate(), Error);

  PolyComplex mismatch = two_octahedra({0, 1, 2, 3, 4, 5}, {0, 6, 2, 3, 7, 8});
  // glued vertices now carry different labels (2 meets 3)
  CHECK_THROWS_AS(mismatch.validate(), Error);
}
