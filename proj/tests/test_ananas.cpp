#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>

#include "geotri/ananas.hpp"
#include "geotri/errors.hpp"
#include "geotri/farey.hpp"
#include "geotri/hypgeom.hpp"
#include "geotri/triangulation.hpp"

using namespace geotri;
using namespace geotri::ananas;
using hypgeom::Complex;
using hypgeom::kPi;

namespace {

const double kSqrt3_2 = std::sqrt(3.0) / 2.0;

CuspLattice hexagonal() { return CuspLattice::reduce(Complex(0.5, kSqrt3_2)); }
CuspLattice square() { return CuspLattice::reduce(Complex(0.0, 1.0)); }

DrilledAnanasState base_state(const CuspLattice& lat) {
  return build(lat, farey::FareyTriangle::base());
}

// shapes equal up to the 3-fold relabeling z -> 1/(1-z) -> (z-1)/z
bool same_isometry_class(Complex a, Complex b, double tol) {
  return std::abs(a - b) < tol || std::abs(1.0 / (1.0 - a) - b) < tol ||
         std::abs((a - 1.0) / a - b) < tol;
}

std::vector<double> sorted_cell_volumes(const tri::IdealTriangulation& t) {
  std::vector<double> v;
  for (const auto& c : t.cells) v.push_back(hypgeom::tet_volume(*c.shape));
  std::sort(v.begin(), v.end());
  return v;
}

CuspLattice random_nonrect(std::mt19937& rng) {
  std::uniform_real_distribution<double> re(0.05, 0.45), im(1.05, 1.9), sign(-1.0, 1.0);
  double x = re(rng) * (sign(rng) < 0 ? -1.0 : 1.0);
  return CuspLattice::reduce(Complex(x, im(rng)));
}

std::string random_word(std::mt19937& rng, int len) {
  std::string w;
  std::uniform_int_distribution<int> bit(0, 1);
  for (int i = 0; i < len; ++i) w += bit(rng) ? 'R' : 'L';
  return w;
}

}  // namespace

TEST_CASE("lattice reduction") {
  CuspLattice l1 = CuspLattice::reduce(Complex(0.5, kSqrt3_2));
  CHECK(l1.omega.real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(l1.omega.imag() == doctest::Approx(kSqrt3_2).epsilon(1e-12));
  CHECK_FALSE(l1.rectangular());

  // translation + inversion land in the fundamental domain
  CuspLattice l2 = CuspLattice::reduce(Complex(3.3, 0.4));
  CHECK(std::abs(l2.omega.real()) <= 0.5 + 1e-12);
  CHECK(std::abs(l2.omega) >= 1.0 - 1e-12);
  CHECK(l2.omega.imag() > 0);

  CHECK(square().rectangular());
  CHECK(CuspLattice::reduce(Complex(2.0, 1.5)).rectangular());
  CHECK_FALSE(CuspLattice::reduce(Complex(-0.5, kSqrt3_2)).rectangular());
  CHECK_THROWS_AS(CuspLattice::reduce(Complex(1.0, -2.0)), Error);
  CHECK_THROWS_AS(CuspLattice::reduce(Complex(1.0, 0.0)), Error);
}

TEST_CASE("square lattice base: rectangular pleating is flat at the diagonal") {
  DrilledAnanasState a = base_state(square());
  std::array<double, 3> ang = boundary_angles(a);
  // triangle() order is (0/1, 1/0, 1/1) with the diagonal last
  CHECK(a.triangle().same_triangle(farey::FareyTriangle::base()));
  CHECK(a.triangle().s[2] == farey::Slope(1, 1));
  CHECK(ang[0] == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(ang[1] == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(ang[2] == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(ang[0] + ang[1] + ang[2] == doctest::Approx(2 * kPi).epsilon(1e-10));
}

TEST_CASE("hexagonal lattice base: acute equilateral pleating") {
  DrilledAnanasState a = base_state(hexagonal());
  std::array<double, 3> ang = boundary_angles(a);
  for (double x : ang) {
    CHECK(x < kPi - 1e-6);
    CHECK(x == doctest::Approx(2 * kPi / 3).epsilon(1e-10));
  }
  // core cells are the regular ideal tetrahedron
  Complex z = a.core_shape_1().z;
  CHECK(std::abs(z - Complex(0.5, kSqrt3_2)) < 1e-12);
  CHECK(a.core_volume() == doctest::Approx(2 * 1.0149416064096536).epsilon(1e-12));
}

TEST_CASE("core cells are isometric for random lattices and triangles") {
  std::mt19937 rng(90125);
  for (int i = 0; i < 50; ++i) {
    CuspLattice lat = random_nonrect(rng);
    DrilledAnanasState a = base_state(lat);
    // wander a few nodes down to vary the triangle
    auto walk = tree_walk(a, random_word(rng, 4));
    for (const auto& st : walk) {
      CHECK(same_isometry_class(st.core_shape_1().z, st.core_shape_2().z, 1e-10));
      std::array<double, 3> ang = boundary_angles(st);
      CHECK(ang[0] + ang[1] + ang[2] == doctest::Approx(2 * kPi).epsilon(1e-10));
      // at most one angle >= pi, and only at the forbidden slope
      int big = 0;
      for (int k = 0; k < 3; ++k)
        if (ang[k] >= kPi - 1e-9) {
          ++big;
          REQUIRE(st.forbidden.has_value());
          CHECK(st.triangle().s[k] == *st.forbidden);
        }
      CHECK(big <= 1);
    }
  }
}

TEST_CASE("build accepts any Farey triangle, mediant becomes the diagonal") {
  DrilledAnanasState a =
      build(hexagonal(), farey::FareyTriangle(farey::Slope(1, 0), farey::Slope(-1, 1),
                                              farey::Slope(0, 1)));
  // mediant of {1/0, -1/1} is 0/1
  CHECK(slope_of(a.diagonal()) == farey::Slope(0, 1));
  CHECK(vec_det(a.w1, a.w2) == 1);
  CHECK(a.core_shape_1().geometric());

  // deep triangle: mediant 2/5 = (1/2) + (1/3) componentwise
  DrilledAnanasState b = build(
      hexagonal(),
      farey::FareyTriangle(farey::Slope(1, 2), farey::Slope(1, 3), farey::Slope(2, 5)));
  CHECK(slope_of(b.diagonal()) == farey::Slope(2, 5));
  CHECK(b.core_shape_1().geometric());
  CHECK(b.core_shape_2().geometric());
}

TEST_CASE("hexagonal peel at the diagonal") {
  DrilledAnanasState a = base_state(hexagonal());
  auto [delta, b] = peel(a, farey::Slope(1, 1));
  CHECK(b.triangle().same_triangle(farey::FareyTriangle(
      farey::Slope(0, 1), farey::Slope(1, 0), farey::Slope(-1, 1))));
  REQUIRE(b.forbidden.has_value());
  CHECK(*b.forbidden == farey::Slope(-1, 1));
  CHECK(delta.geometric());

  // oracle: the peel tetrahedron is isometric to the ideal tetrahedron on
  // (0, 1, 1+w, w) for w = exp(i pi/3)
  Complex w(0.5, kSqrt3_2);
  hypgeom::ShapeParameter oracle = hypgeom::cross_ratio(
      hypgeom::IdealPoint(Complex(0.0)), hypgeom::IdealPoint(Complex(1.0)),
      hypgeom::IdealPoint(1.0 + w), hypgeom::IdealPoint(w));
  CHECK(oracle.z.imag() > 0);
  CHECK(std::abs(delta.z - oracle.z) < 1e-12);
}

TEST_CASE("peel preconditions") {
  DrilledAnanasState sq = base_state(square());
  CHECK_THROWS_AS(peel(sq, farey::Slope(1, 1)), Error);  // flat diagonal
  try {
    peel(sq, farey::Slope(1, 1));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AngleAtLeastPi);
  }
  try {
    peel(sq, farey::Slope(1, 2));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadInput);
  }

  DrilledAnanasState hx = base_state(hexagonal());
  DrilledAnanasState b = peel(hx, farey::Slope(1, 1)).second;
  try {
    peel(b, *b.forbidden);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ForbiddenEdge);
  }
}

TEST_CASE("rectangular lattice: both diagonal choices peel away from the flat edge") {
  for (auto s3 : {farey::Slope(1, 1), farey::Slope(-1, 1)}) {
    DrilledAnanasState a =
        build(square(), farey::FareyTriangle(farey::Slope(0, 1), farey::Slope(1, 0), s3));
    std::array<double, 3> ang = boundary_angles(a);
    int flat = -1;
    for (int k = 0; k < 3; ++k)
      if (std::abs(ang[k] - kPi) < 1e-9) flat = k;
    REQUIRE(flat >= 0);
    for (int k = 0; k < 3; ++k) {
      if (k == flat) {
        CHECK_THROWS_AS(peel(a, a.triangle().s[k]), Error);
      } else {
        auto [d, b] = peel(a, a.triangle().s[k]);
        CHECK(d.geometric());
        CHECK(verify_geometric(to_triangulation(b)).pass);
      }
    }
  }
}

TEST_CASE("two-cell ananas triangulation structure") {
  DrilledAnanasState a = base_state(hexagonal());
  tri::IdealTriangulation t = to_triangulation(a);
  REQUIRE(t.size() == 2);

  int boundary_faces = 0;
  for (const auto& c : t.cells)
    for (const auto& g : c.glue)
      if (g.is_boundary()) ++boundary_faces;
  CHECK(boundary_faces == 2);

  // cusp 0 at infinity, cusp 1 the thorn
  auto verts = t.vertex_classes();
  REQUIRE(verts.size() == 2);
  std::set<int> cusps;
  for (const auto& v : verts) cusps.insert(v.cusp);
  CHECK(cusps == std::set<int>{0, 1});

  tri::GeometricReport rep = verify_geometric(t, 1e-9, true);
  CHECK(rep.pass);
  // one interior edge class: the vertical edge alpha with angle sum 2 pi
  int interior = 0;
  for (const auto& e : rep.edges)
    if (e.edge.interior) {
      ++interior;
      CHECK(e.angle_sum == doctest::Approx(2 * kPi).epsilon(1e-10));
      CHECK(e.edge.edges.size() == 6);
    }
  CHECK(interior == 1);
}

TEST_CASE("each peel is a geometric 2-3 move on the triangulation") {
  std::mt19937 rng(8128);
  for (int trial = 0; trial < 8; ++trial) {
    CuspLattice lat = random_nonrect(rng);
    auto walk = tree_walk(base_state(lat), random_word(rng, 3));
    DrilledAnanasState a = walk.back();
    int k = int(a.peeled.size());  // cells[k], cells[k+1] are the cones

    farey::FareyTriangle tr = a.triangle();
    // peel at slope index i corresponds to a 2-3 move on the shared lateral
    // face of the first cone: (inf,0,w1) is face 3, (inf,w1,d) face 1,
    // (inf,0,d) face 2
    const int site_face[3] = {3, 1, 2};
    for (int i = 0; i < 3; ++i) {
      if (a.forbidden && tr.s[i] == *a.forbidden) continue;
      tri::IdealTriangulation before = to_triangulation(a);
      tri::IdealTriangulation moved =
          tri::pachner_23(before, tri::PachnerSite::at_face(k, site_face[i]));
      tri::IdealTriangulation after = to_triangulation(peel(a, tr.s[i]).second);
      CHECK(moved.size() == after.size());
      CHECK(tri::isomorphic(moved, after));
      auto va = sorted_cell_volumes(moved), vb = sorted_cell_volumes(after);
      for (size_t j = 0; j < va.size(); ++j)
        CHECK(va[j] == doctest::Approx(vb[j]).epsilon(1e-9));
    }
  }
}

TEST_CASE("volume telescopes over 50 peels") {
  std::mt19937 rng(1729);
  CuspLattice lat = random_nonrect(rng);
  auto walk = tree_walk(base_state(lat), random_word(rng, 50));
  REQUIRE(walk.size() == 51);
  double vol0 = to_triangulation(walk.front()).volume();
  CHECK(vol0 == doctest::Approx(walk.front().core_volume()).epsilon(1e-12));
  for (const auto& st : walk) {
    double sum = st.core_volume();
    for (const auto& r : st.peeled) sum += hypgeom::tet_volume(r.shape);
    CHECK(sum == doctest::Approx(vol0).epsilon(1e-8));
    CHECK(to_triangulation(st).volume() == doctest::Approx(vol0).epsilon(1e-8));
  }
}

TEST_CASE("tree walk matches the Farey path") {
  std::mt19937 rng(314159);
  for (int trial = 0; trial < 10; ++trial) {
    CuspLattice lat = random_nonrect(rng);
    DrilledAnanasState a0 = base_state(lat);
    std::string word = random_word(rng, 25);
    auto walk = tree_walk(a0, word);
    auto path = farey::path(a0.triangle(), word);
    REQUIRE(walk.size() == path.size());
    for (size_t i = 0; i < walk.size(); ++i) {
      CHECK(walk[i].triangle().same_triangle(path[i].triangle));
      if (i > 0) CHECK(walk[i].peeled.back().created == path[i].new_slope);
      CHECK(int(walk[i].peeled.size()) == int(i));
    }
  }
}

TEST_CASE("deep walks stay geometric") {
  std::mt19937 rng(46692);
  // one deep walk, several medium ones
  for (int trial = 0; trial < 6; ++trial) {
    CuspLattice lat = random_nonrect(rng);
    int depth = trial == 0 ? 100 : 30;
    auto walk = tree_walk(base_state(lat), random_word(rng, depth));
    for (size_t i = 0; i < walk.size(); i += (i < 10 ? 1 : 7)) {
      tri::IdealTriangulation t = to_triangulation(walk[i]);
      CHECK(t.size() == int(i) + 2);
      CHECK(verify_geometric(t).pass);
    }
    // the last node of the deep walk in full
    tri::IdealTriangulation last = to_triangulation(walk.back());
    CHECK(last.size() == depth + 2);
    CHECK(verify_geometric(last).pass);
  }
}

TEST_CASE("created slopes have nondecreasing, eventually increasing denominators") {
  auto walk = tree_walk(base_state(hexagonal()), "RLRLRLRLRLRLRLRLRLRL");
  const auto& recs = walk.back().peeled;
  for (size_t i = 1; i < recs.size(); ++i) {
    CHECK(recs[i].created.q >= recs[i - 1].created.q);
    if (i >= 3) CHECK(recs[i].created.q > recs[i - 1].created.q);
  }
}

TEST_CASE("identity cover reproduces the triangulation") {
  DrilledAnanasState a = tree_walk(base_state(hexagonal()), "RL").back();
  tri::IdealTriangulation t = to_triangulation(a);
  tri::IdealTriangulation lift = lift_to_cover(a, AnanasCover{});
  CHECK(lift.size() == t.size());
  CHECK(tri::isomorphic(t, lift));
  CHECK_THROWS_AS(lift_to_cover(a, AnanasCover{1, 0, 2, 0}), Error);
}

TEST_CASE("index-2 cover of the two-cell ananas") {
  DrilledAnanasState a = base_state(hexagonal());
  tri::IdealTriangulation lift = lift_to_cover(a, AnanasCover{2, 0, 0, 1});
  REQUIRE(lift.size() == 4);
  CHECK(verify_geometric(lift).pass);
  // the thorn splits into two cusps; infinity stays one cusp
  std::set<int> cusps;
  for (const auto& c : lift.cells)
    for (int x : c.cusp) cusps.insert(x);
  CHECK(cusps == std::set<int>{0, 1, 2});
  CHECK(lift.volume() == doctest::Approx(2 * to_triangulation(a).volume()).epsilon(1e-10));
}

TEST_CASE("deck action is a triangulation automorphism") {
  DrilledAnanasState a = tree_walk(base_state(hexagonal()), "R").back();
  int ncells = int(a.peeled.size()) + 2;
  // diagonal covers: cosets enumerate in scan order (i mod p, j mod q)
  for (auto [p, q] : {std::pair<int, int>{2, 1}, {1, 3}, {2, 2}}) {
    tri::IdealTriangulation lift = lift_to_cover(a, AnanasCover{p, 0, 0, q});
    int deg = p * q;
    REQUIRE(lift.size() == ncells * deg);
    auto rep_index = [&](int i, int j) {
      return ((i % p + p) % p) * q + ((j % q + q) % q);
    };
    // deck translations by the coset representatives
    for (int gi = 0; gi < p; ++gi)
      for (int gj = 0; gj < q; ++gj) {
        auto map_cell = [&](int c) {
          int r = c / ncells, b = c % ncells;
          int ri = r / q, rj = r % q;
          return rep_index(ri + gi, rj + gj) * ncells + b;
        };
        for (int c = 0; c < lift.size(); ++c) {
          int mc = map_cell(c);
          CHECK(lift.cells[c].shape->z == lift.cells[mc].shape->z);
          for (int f = 0; f < 4; ++f) {
            const tri::Gluing& g1 = lift.cells[c].glue[f];
            const tri::Gluing& g2 = lift.cells[mc].glue[f];
            if (g1.is_boundary()) {
              CHECK(g2.is_boundary());
              continue;
            }
            REQUIRE_FALSE(g2.is_boundary());
            CHECK(g2.cell == map_cell(g1.cell));
            CHECK(g2.face == g1.face);
            CHECK(g2.perm == g1.perm);
          }
        }
      }
  }
}

TEST_CASE("cusp cellulation figure") {
  std::string svg = cellulation_svg(base_state(hexagonal()));
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);
  CHECK(svg.rfind("</svg>") != std::string::npos);
}
