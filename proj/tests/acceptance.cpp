// Acceptance suite: one pass/fail line per criterion, exit 1 on any failure.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "geotri/ananas.hpp"
#include "geotri/canonical.hpp"
#include "geotri/congruence.hpp"
#include "geotri/coning.hpp"
#include "geotri/errors.hpp"
#include "geotri/farey.hpp"
#include "geotri/hypgeom.hpp"
#include "geotri/triangulation.hpp"

using namespace geotri;
using hypgeom::Complex;
using hypgeom::kPi;
using hypgeom::ShapeParameter;

namespace {

// pinned tolerances
constexpr double kAngleSumTol = 1e-12;
constexpr double kVolumeTol = 1e-9;
constexpr double kTreeTol = 1e-8;
constexpr double kPeelTol = 1e-8;
constexpr double kResidualTol = 1e-9;
constexpr double kFlatTol = 1e-9;
constexpr double kShiftTol = 1e-10;

const double kOctVolume = 3.6638623767088760;

int failures = 0;

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

ananas::CuspLattice random_nonrect(std::mt19937& rng) {
  std::uniform_real_distribution<double> re(0.05, 0.45), im(1.05, 1.9), sign(-1.0, 1.0);
  double x = re(rng) * (sign(rng) < 0 ? -1.0 : 1.0);
  return ananas::CuspLattice::reduce(Complex(x, im(rng)));
}

std::string random_word(std::mt19937& rng, int len) {
  std::string w;
  std::uniform_int_distribution<int> bit(0, 1);
  for (int i = 0; i < len; ++i) w += bit(rng) ? 'R' : 'L';
  return w;
}

ananas::DrilledAnanasState base_state(const ananas::CuspLattice& lat) {
  return ananas::build(lat, farey::FareyTriangle::base());
}

// two geometric tetrahedra glued along (inf, 0, 1), apexes a0 above, a1 below
tri::IdealTriangulation make_bipyramid(Complex a0, Complex a1) {
  tri::IdealTriangulation t;
  t.cells.resize(2);
  t.cells[0].shape = ShapeParameter(a0);
  t.cells[1].shape = ShapeParameter(1.0 / a1);
  t.cells[0].glue[3] = tri::Gluing{1, 3, tri::Perm4{{1, 0, 2, 3}}};
  t.cells[1].glue[3] = tri::Gluing{0, 3, tri::Perm4{{1, 0, 2, 3}}};
  t.cells[0].cusp = {0, 1, 2, 3};
  t.cells[1].cusp = {1, 0, 2, 4};
  t.validate();
  return t;
}

// four tetrahedra around the interior edge (inf, 0), equator e[0..3] winding
// once; cell s = (e_s, e_{s+1}, inf, 0) with shape e_{s+1}/e_s
tri::IdealTriangulation make_star(const std::array<Complex, 4>& e) {
  tri::IdealTriangulation t;
  t.cells.resize(4);
  for (int s = 0; s < 4; s++) {
    t.cells[s].shape = ShapeParameter(e[(s + 1) % 4] / e[s]);
    t.cells[s].glue[0] = tri::Gluing{(s + 1) % 4, 1, tri::Perm4{{1, 0, 2, 3}}};
    t.cells[s].glue[1] = tri::Gluing{(s + 3) % 4, 0, tri::Perm4{{1, 0, 2, 3}}};
    t.cells[s].cusp = {2 + s, 2 + (s + 1) % 4, 0, 1};
  }
  t.validate();
  return t;
}

bool all_geometric(const tri::IdealTriangulation& t) {
  for (const auto& c : t.cells)
    if (!c.shape || !c.shape->geometric()) return false;
  return true;
}

bool same_isometry_class(Complex a, Complex b, double tol) {
  return std::abs(a - b) < tol || std::abs(1.0 / (1.0 - a) - b) < tol ||
         std::abs((a - 1.0) / a - b) < tol;
}

// ------------------------------------------------------------------ criteria

// dihedral triples of random geometric shapes sum to pi
bool criterion_1() {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(1e-3, 3.0);
  for (int i = 0; i < 1000; ++i) {
    ShapeParameter s{Complex(re(rng), im(rng))};
    auto tri = hypgeom::dihedral_angles(s);
    if (!close(tri.sum(), kPi, kAngleSumTol)) return false;
  }
  return true;
}

// volume conservation and geometricity over random 2-3 / 3-2 / 4-4 sites,
// with combinatorial 3-2 o 2-3 round trips
bool criterion_2() {
  std::mt19937 rng(202);
  std::uniform_real_distribution<double> re(-1.0, 2.0), im(0.05, 2.0);
  int sites = 0;
  while (sites < 140) {
    Complex a0(re(rng), im(rng)), a1(re(rng), -im(rng));
    tri::IdealTriangulation t;
    try {
      t = make_bipyramid(a0, a1);
    } catch (const Error&) {
      continue;
    }
    tri::IdealTriangulation t3;
    try {
      t3 = tri::pachner_23(t, tri::PachnerSite::at_face(0, 3));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotConvex) return false;
      continue;
    }
    if (!close(t3.volume(), t.volume(), kVolumeTol)) return false;
    if (!all_geometric(t3)) return false;
    auto t2 = tri::pachner_32(t3, tri::PachnerSite::at_edge(0, 2, 3));
    if (!tri::isomorphic(t, t2)) return false;
    if (!close(t2.volume(), t.volume(), kVolumeTol)) return false;
    if (!all_geometric(t2)) return false;
    sites += 2;
  }
  std::uniform_real_distribution<double> rad(0.3, 2.0), uni(0.0, 1.0);
  while (sites < 200) {
    std::array<double, 4> th;
    for (double& x : th) x = 2.0 * kPi * uni(rng);
    std::sort(th.begin(), th.end());
    bool ok = true;
    for (int s = 0; s < 4; ++s) {
      double gap = (s < 3 ? th[s + 1] - th[s] : th[0] + 2.0 * kPi - th[3]);
      if (gap < 0.05 || gap > kPi - 0.05) ok = false;
    }
    if (!ok) continue;
    std::array<Complex, 4> e;
    for (int s = 0; s < 4; ++s) e[s] = std::polar(rad(rng), th[s]);
    auto t = make_star(e);
    if (!tri::verify_geometric(t).pass) continue;
    for (int diag : {0, 1}) {
      tri::IdealTriangulation u;
      try {
        u = tri::pachner_44(t, tri::PachnerSite::at_edge(0, 2, 3), diag);
      } catch (const Error&) {
        continue;
      }
      if (!close(u.volume(), t.volume(), kVolumeTol)) return false;
      if (!all_geometric(u)) return false;
      ++sites;
    }
  }
  return true;
}

// every node of random depth-100 walks over non-rectangular lattices is a
// fully verified geometric triangulation
bool criterion_3() {
  std::mt19937 rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    ananas::CuspLattice lat = random_nonrect(rng);
    auto states = ananas::tree_walk(base_state(lat), random_word(rng, 100));
    if (states.size() != 101) return false;
    for (const auto& st : states) {
      auto t = ananas::to_triangulation(st);
      auto rep = tri::verify_geometric(t, kTreeTol);
      if (!rep.pass) return false;
      for (const auto& er : rep.edges)
        if (er.edge.interior && !close(er.angle_sum, 2.0 * kPi, kTreeTol)) return false;
    }
  }
  return true;
}

// vol(N_0) telescopes through 50 peeled layers
bool criterion_4() {
  std::mt19937 rng(404);
  for (int trial = 0; trial < 5; ++trial) {
    ananas::CuspLattice lat = random_nonrect(rng);
    auto states = ananas::tree_walk(base_state(lat), random_word(rng, 50));
    double vol0 = states.front().core_volume();
    const auto& last = states.back();
    if (last.peeled.size() != 50) return false;
    double sum = last.core_volume();
    for (const auto& r : last.peeled) sum += hypgeom::tet_volume(r.shape);
    if (!close(sum, vol0, kPeelTol)) return false;
  }
  return true;
}

// walk triangles match the Farey path; golden-ratio approximants satisfy the
// 1/q^2 bound to depth 40
bool criterion_5() {
  std::mt19937 rng(505);
  for (int trial = 0; trial < 10; ++trial) {
    ananas::CuspLattice lat = random_nonrect(rng);
    std::string word = random_word(rng, 30);
    auto walk = ananas::tree_walk(base_state(lat), word);
    auto nodes = farey::path(farey::FareyTriangle::base(), word);
    if (walk.size() != nodes.size()) return false;
    for (size_t i = 0; i < walk.size(); ++i)
      if (!walk[i].triangle().same_triangle(nodes[i].triangle)) return false;
  }
  std::string golden;
  for (int i = 0; i < 20; ++i) golden += "RL";
  auto nodes = farey::path(farey::FareyTriangle::base(), golden);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  if (nodes.size() != 41) return false;
  for (size_t i = 1; i < nodes.size(); ++i) {
    double p = nodes[i].new_slope.p.convert_to<double>();
    double q = nodes[i].new_slope.q.convert_to<double>();
    if (q <= 0) return false;
    if (std::abs(p / q - phi) >= 1.0 / (q * q)) return false;
  }
  return true;
}

// resting balls report 4 tangencies exactly on rectangular lattices; other
// lattices give two isometric acute Delaunay triangles; residuals tiny
bool criterion_6() {
  std::mt19937 rng(606);
  std::uniform_real_distribution<double> re(0.01, 0.45), im(1.05, 2.2), sign(-1.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    bool rect = trial % 5 == 0;
    double x = rect ? 0.0 : re(rng) * (sign(rng) < 0 ? -1.0 : 1.0);
    auto lat = ananas::CuspLattice::reduce(Complex(x, im(rng)));
    canonical::PackingScene s;
    s.lattice = lat;
    s.full_height = 10.0;
    auto ball = canonical::resting_ball(s, kResidualTol);
    if ((ball.tangencies.size() == 4) != rect) return false;
    if (ball.tangencies.size() != 3 && ball.tangencies.size() != 4) return false;
    for (double r : ball.residuals)
      if (r >= kResidualTol) return false;
    auto cc = canonical::cusp_cellulation(lat, kResidualTol);
    if (cc.rectangular != rect) return false;
    if (rect) continue;
    if (cc.cells.size() != 2) return false;
    std::array<std::vector<double>, 2> sides;
    for (int k = 0; k < 2; ++k) {
      const auto& cell = cc.cells[k];
      if (cell.vertices.size() != 3) return false;
      for (int i = 0; i < 3; ++i) {
        Complex a = cell.vertices[i], b = cell.vertices[(i + 1) % 3],
                c = cell.vertices[(i + 2) % 3];
        if (std::norm(b - a) + std::norm(c - a) <= std::norm(c - b)) return false;  // acute
        sides[k].push_back(std::abs(b - a));
      }
      std::sort(sides[k].begin(), sides[k].end());
    }
    for (int i = 0; i < 3; ++i)
      if (!close(sides[0][i], sides[1][i], 1e-9)) return false;
  }
  return true;
}

// omega = i: flat diagonal, refused peel, two depth-50 geometric walks, and
// the two diagonal choices of the square bipyramid differ by a geometric 4-4
bool criterion_7() {
  auto square = ananas::CuspLattice::reduce(Complex(0.0, 1.0));
  auto a = base_state(square);
  int flat = a.triangle().index_of(farey::Slope(1, 1));
  if (flat < 0) return false;
  if (!close(ananas::boundary_angles(a)[flat], kPi, kFlatTol)) return false;
  try {
    ananas::peel(a, farey::Slope(1, 1));
    return false;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::AngleAtLeastPi) return false;
  }
  std::mt19937 rng(707);
  std::array<Complex, 2> core{};
  int idx = 0;
  for (auto s3 : {farey::Slope(1, 1), farey::Slope(-1, 1)}) {
    auto a0 = ananas::build(
        square, farey::FareyTriangle(farey::Slope(0, 1), farey::Slope(1, 0), s3));
    core[idx++] = a0.core_shape_1().z;
    auto states = ananas::tree_walk(a0, random_word(rng, 50));
    if (states.size() != 51) return false;
    for (const auto& st : states)
      if (!tri::verify_geometric(ananas::to_triangulation(st), kTreeTol).pass)
        return false;
  }
  // ideal square bipyramid (regular octahedron) first split along the
  // pole-pole diagonal; the two equator diagonals are the two choices
  auto star = make_star({Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)});
  double vol = star.volume();
  auto u0 = tri::pachner_44(star, tri::PachnerSite::at_edge(0, 2, 3), 0);
  auto u1 = tri::pachner_44(star, tri::PachnerSite::at_edge(0, 2, 3), 1);
  for (const auto* u : {&u0, &u1}) {
    if (!close(u->volume(), vol, kVolumeTol)) return false;
    if (!all_geometric(*u)) return false;
  }
  // one further geometric 4-4 about the new central edge carries one choice
  // to the other
  bool related = false;
  for (int d : {0, 1}) {
    auto moved = tri::pachner_44(u0, tri::PachnerSite::at_edge(0, 0, 1), d);
    if (!close(moved.volume(), vol, kVolumeTol) || !all_geometric(moved)) return false;
    if (tri::isomorphic(moved, u1)) related = true;
  }
  if (!related) return false;
  // the bipyramid halves are isometric to the ananas core cells
  for (Complex z : core) {
    bool found = false;
    for (const auto& c : u0.cells)
      if (same_isometry_class(z, c.shape->z, 1e-9)) found = true;
    if (!found) return false;
  }
  return true;
}

// regular ideal octahedron with vertex order (inf, 0, 1, i, -1, -i)
coning::Polyhedron octahedron(const std::vector<int>& labels) {
  coning::Polyhedron p;
  p.cusp = labels;
  p.pos = {coning::IdealPoint::infinity(),    coning::IdealPoint::at({0.0, 0.0}),
           coning::IdealPoint::at({1.0, 0.0}), coning::IdealPoint::at({0.0, 1.0}),
           coning::IdealPoint::at({-1.0, 0.0}), coning::IdealPoint::at({0.0, -1.0})};
  p.faces = {{0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 2},
             {1, 3, 2}, {1, 4, 3}, {1, 5, 4}, {1, 2, 5}};
  return p;
}

coning::PolyComplex two_octahedra(const std::vector<int>& la, const std::vector<int>& lb) {
  coning::PolyComplex c;
  c.cells.push_back(octahedron(la));
  coning::Polyhedron m = octahedron(lb);
  for (auto& q : m.pos)
    if (!q.inf) q.z = Complex(1.0, 1.0) - q.z;  // share the face (inf, 1, i)
  c.cells.push_back(m);
  c.gluings.push_back({0, 0, 1, 0, {0, 2, 1}});
  return c;
}

// shared-face subdivisions of two glued octahedra agree from both sides in
// both order regimes; the total order yields positively oriented tetrahedra
bool criterion_8() {
  {  // total order: the shared face is coned from the common minimum (case 2)
    auto c = two_octahedra({0, 1, 2, 3, 4, 5}, {0, 6, 3, 2, 7, 8});
    auto o = coning::CuspOrder::total({0, 1, 2, 3, 4, 5, 6, 7, 8});
    auto pd = coning::iterated_cone(c, o);
    if (pd.face_cases.size() != 1 || pd.face_cases[0].kase != 2) return false;
    if (pd.face_cases[0].w_a != 0 || pd.face_cases[0].w_b != 0) return false;
    auto t = coning::choose_diagonals(pd);
    if (t.size() != 8 || !all_geometric(t)) return false;
    if (!close(t.volume(), 2.0 * kOctVolume, kVolumeTol)) return false;
    if (!tri::verify_geometric(t).pass) return false;
  }
  {  // no unique minimum on the shared face: it stays undivided (case 1)
    auto c = two_octahedra({0, 1, 2, 3, 4, 5}, {0, 6, 3, 2, 7, 8});
    auto o = coning::CuspOrder::from_edges({{1, 0}, {1, 2}, {1, 3}, {1, 4}, {1, 5},
                                            {6, 0}, {6, 2}, {6, 3}, {6, 7}, {6, 8}});
    auto pd = coning::iterated_cone(c, o);
    if (pd.face_cases.size() != 1 || pd.face_cases[0].kase != 1) return false;
    auto t = coning::choose_diagonals(pd);
    if (t.size() != 8 || !all_geometric(t)) return false;
    if (!close(t.volume(), 2.0 * kOctVolume, kVolumeTol)) return false;
    if (!tri::verify_geometric(t).pass) return false;
  }
  return true;
}

// shift law L(l + t) = L(l) + t, plus a Monte-Carlo search for empty tangent
// balls linking horoballs in the same orbit beyond distance L
bool criterion_9() {
  std::mt19937 rng(909);
  std::uniform_real_distribution<double> uni(0.0, 1.0), ell(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    ananas::CuspLattice lat = random_nonrect(rng);
    double l = ell(rng), t = 3.0 * uni(rng);
    double lhs = canonical::problematic_bound(l + t, lat);
    double rhs = canonical::problematic_bound(l, lat) + t;
    if (!close(lhs, rhs, kShiftTol)) return false;
  }
  int empties = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    ananas::CuspLattice lat = trial % 9 == 0
                                  ? ananas::CuspLattice::reduce(Complex(0.0, 1.0 + uni(rng)))
                                  : random_nonrect(rng);
    double w = std::min(1.0, std::abs(lat.omega));
    double L = canonical::problematic_bound(0.0, lat);
    double h = 0.05 + 0.95 * uni(rng);
    Complex x(uni(rng), uni(rng));
    ananas::LatticeVec lam(1 + int(uni(rng) * 2), int(uni(rng) * 2));
    Complex p = x, q = x + ananas::lattice_position(lam, lat);
    double sep = std::abs(q - p);
    if (sep < w - 1e-9) return false;
    // tangent ball with its lowest point on the plane: |c - p| = sqrt(2 r h)
    double r = (sep * sep / (8.0 * h)) * (1.0 + 2.0 * uni(rng));
    double d2 = 2.0 * r * h - sep * sep / 4.0;
    if (d2 < 0) continue;
    Complex mid = 0.5 * (p + q);
    Complex n = (q - p) / sep * Complex(0, 1);
    Complex c = mid + (uni(rng) < 0.5 ? 1.0 : -1.0) * std::sqrt(d2) * n;
    bool empty = true;
    for (int i = -6; i <= 6 && empty; ++i)
      for (int j = -6; j <= 6 && empty; ++j) {
        Complex lp = ananas::lattice_position(ananas::LatticeVec(i, j), lat);
        if (std::norm(c - lp) < 2.0 * r - 1e-12) empty = false;
      }
    if (!empty) continue;
    ++empties;
    // the linked pair sits at cusp distance l - log h, which must be < L
    if (0.0 - std::log(h) >= L + 1e-9) return false;
  }
  return empties > 100;  // the oracle actually exercised the bound
}

// residue machinery over Q(i) and certificate re-verification
bool criterion_10() {
  using namespace congruence;
  auto gauss = make_field({1, 0, 1});
  NFElem i_gen = nf_gen(gauss);

  // first 50 odd primes: omega = i stays independent exactly when p = 3 mod 4
  std::vector<long long> odd_primes;
  for (long long p = 3; int(odd_primes.size()) < 50; p += 2) {
    bool prime = true;
    for (long long d = 3; d * d <= p; d += 2)
      if (p % d == 0) prime = false;
    if (prime) odd_primes.push_back(p);
  }
  for (long long p : odd_primes) {
    auto maps = residue_maps(gauss, p);
    if (maps.empty()) return false;
    bool indep = false;
    for (const auto& m : maps)
      if (omega_independent(i_gen, m)) indep = true;
    if (indep != (p % 4 == 3)) return false;
  }

  // find_prime_with_order: verified witnesses for q in {4, 10, 12}
  NFElem two = nf(gauss, 2);
  for (long long q : {4LL, 10LL, 12LL}) {
    auto map = find_prime_with_order(two, q, {});
    if (q == 4 && map.p != 5) return false;
    FFElem a = reduce(two, map);
    // independent brute-force order computation
    FFElem pw = a;
    long long ord = 1;
    while (!(pw == ff_one(map.codomain))) {
      pw = ff_mul(map.codomain, pw, a);
      if (++ord > 2 * q) return false;
    }
    if (ord != q) return false;
  }

  // separate_from_Zomega witness re-verified by full enumeration
  auto cbrt2 = make_field({-2, 0, 0, 1});
  NFElem alpha = nf_gen(cbrt2);
  NFElem y = alpha * alpha;
  auto sep = separate_from_Zomega(y, alpha);
  {
    FFElem yr = reduce(y, sep);
    FFElem om = reduce(alpha, sep);
    for (long long mm = 0; mm < sep.p; ++mm)
      for (long long nn = 0; nn < sep.p; ++nn) {
        FFElem img = ff_add(sep.codomain, ff_from_int(sep.codomain, mm),
                            ff_mul(sep.codomain, ff_from_int(sep.codomain, nn), om));
        if (img == yr) return false;
      }
  }

  // loxodromic obstruction certificates re-verified by exhaustive scans
  struct Fixture {
    FieldPtr F;
    std::vector<Rat> r, u, lam;
    OmegaCoords coords;
    bool with_omega;
  };
  auto zeta8 = make_field({1, 0, 0, 0, 1});
  std::vector<Fixture> fixtures = {
      {gauss, {1, 0}, {2, 0}, {3, 0}, {1, 0, 2}, true},
      {rationals(), {2}, {-4}, {4}, {1, 0, 2}, false},
      {zeta8, {0, 0, 0, -1}, {0, 2, 0, 0}, {2, 0, 0, 0}, {1, 0, 2}, false},
  };
  for (const auto& fx : fixtures) {
    NFElem r = nf_make(fx.F, fx.r), u = nf_make(fx.F, fx.u), lam = nf_make(fx.F, fx.lam);
    NFElem om = fx.with_omega ? nf_gen(fx.F) : NFElem{};
    auto cert = loxodromic_obstruction(r, u, lam, fx.coords, 'm',
                                       fx.with_omega ? &om : nullptr);
    // rebuild the quadratic extension and re-run the full exponent scan
    SqrtExtension ext = adjoin_sqrt(nf(fx.F, 1) - r * u);
    if (ext.M->minpoly != cert.extension->minpoly) return false;
    const FiniteField& K = cert.sigma.codomain;
    FFElem sl = reduce(ext.embed(lam), cert.sigma);
    FFElem sr = reduce(ext.embed(r), cert.sigma);
    FFElem su = reduce(ext.embed(u), cert.sigma);
    if (!ff_order_is(K, sl, cert.lambda_order)) return false;
    long long ord = cert.lambda_order.convert_to<long long>();
    FFElem pos = ff_one(K), neg = ff_one(K);
    FFElem sli = ff_inv(K, sl);
    long long checked = 0;
    for (long long mm = 0; mm < ord; ++mm) {
      bool admissible = cert.kase == 3 ||
                        ((fx.coords.v * mm - fx.coords.m) % cert.p + cert.p) % cert.p == 0;
      if (admissible) {
        FFElem trace = ff_add(K, ff_mul(K, sr, pos), ff_mul(K, su, neg));
        if (trace == ff_from_int(K, 2) || trace == ff_from_int(K, -2)) return false;
        ++checked;
      }
      pos = ff_mul(K, pos, sl);
      neg = ff_mul(K, neg, sli);
    }
    if (checked != cert.scanned) return false;
    if (checked == 0) return false;  // the scan must not be vacuous
    if (cert.kase < 1 || cert.kase > 3) return false;
  }
  return true;
}

// trace-distinct unimodular matrices are never conjugate in SL(2, F_q):
// the trace is constant on conjugacy classes, exhaustively
bool criterion_11() {
  using namespace congruence;
  for (int q : {2, 3, 4, 5, 7, 8, 9}) {
    SmallField K = small_field(q);
    auto G = sl2_elements(K);
    size_t expect = size_t(q) * (size_t(q) * q - 1);
    if (G.size() != expect) return false;
    for (const auto& x : G) {
      int tx = smat_trace(K, x);
      for (const auto& g : G) {
        // g x g^{-1} with the adjugate as the inverse (det g = 1)
        SMat ginv = {g[3], K.neg(g[1]), K.neg(g[2]), g[0]};
        SMat conj = smat_mul(K, smat_mul(K, g, x), ginv);
        if (smat_trace(K, conj) != tx) return false;
      }
    }
  }
  // spot check through the library predicates
  if (!sl2_trace_separation(5, {1, 0, 0, 1}, {2, 0, 3, 3})) return false;
  if (sl2_conjugate(5, {1, 0, 0, 1}, {2, 0, 3, 3})) return false;
  return true;
}

void report(int num, const char* name, bool (*crit)()) {
  bool pass = false;
  try {
    pass = crit();
  } catch (const std::exception& e) {
    std::printf("criterion %2d unexpected error: %s\n", num, e.what());
  }
  std::printf("criterion %2d %-42s %s\n", num, name, pass ? "PASS" : "FAIL");
  if (!pass) ++failures;
}

}  // namespace

int main() {
  report(1, "angle-sum law over random shapes", criterion_1);
  report(2, "Pachner volume conservation and round trips", criterion_2);
  report(3, "depth-100 tree walks stay geometric", criterion_3);
  report(4, "peel volume telescoping to depth 50", criterion_4);
  report(5, "Farey cross-check and golden approximants", criterion_5);
  report(6, "rectangularity dichotomy of resting balls", criterion_6);
  report(7, "rectangular ananas and the 4-4 relation", criterion_7);
  report(8, "coning consistency on glued octahedra", criterion_8);
  report(9, "problematic-bound shift law and Monte Carlo", criterion_9);
  report(10, "residue machinery and certificates over Q(i)", criterion_10);
  report(11, "SL(2, F_q) trace separation, exhaustive", criterion_11);
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
