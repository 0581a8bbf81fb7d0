#include "geotri/ananas.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "geotri/errors.hpp"

namespace geotri {
namespace ananas {

using hypgeom::kPi;

namespace {

using BigC = boost::multiprecision::cpp_complex_50;
using BigF = BigC::value_type;

// slope-to-vector marking: slope p/q |-> q*u + p*v.  The basis is chosen so
// that the base triangle (0/1, 1/0, 1/1) realizes the Delaunay pleating of
// the lattice torus (acute triangles, or right ones in the rectangular
// case): the diagonal u + v must be the short diagonal of the fundamental
// parallelogram, which for reduced omega with Re > 0 forces v = omega - 1.
struct Frame {
  BigC u, v;
};

Frame framing(const CuspLattice& lat) {
  BigC omega(lat.omega.real(), lat.omega.imag());
  Frame fr;
  fr.u = BigC(1);
  fr.v = lat.omega.real() > 1e-9 ? omega - BigC(1) : omega;
  return fr;
}

BigC position(const LatticeVec& p, const Frame& fr) {
  return BigF(p.m) * fr.u + BigF(p.n) * fr.v;
}

// projective point of CP^1; infinity = (1, 0)
struct PPt {
  BigC num, den;
};

PPt at_infinity() { return {BigC(1), BigC(0)}; }
PPt at(const BigC& z) { return {z, BigC(1)}; }

BigC pdet(const PPt& a, const PPt& b) { return a.num * b.den - b.num * a.den; }

BigC big_cross_ratio(const PPt& v0, const PPt& v1, const PPt& v2, const PPt& v3) {
  BigC num = pdet(v2, v0) * pdet(v3, v1);
  BigC den = pdet(v2, v1) * pdet(v3, v0);
  if (den == BigC(0)) fail(ErrorKind::DegenerateInput, "coincident ideal vertices");
  return num / den;
}

Complex to_complex(const BigC& z) {
  return Complex(z.real().convert_to<double>(), z.imag().convert_to<double>());
}

farey::Int fdiv(const farey::Int& a, const farey::Int& b) {
  farey::Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

// finite-index sublattice in exact integer form; columns (a, b), (c, d)
struct Sub {
  Int a, b, c, d, det;

  // canonical residue of x modulo the sublattice
  LatticeVec reduce(const LatticeVec& x) const {
    Int t1 = d * x.m - c * x.n;
    Int t2 = -b * x.m + a * x.n;
    Int k1 = fdiv(t1, det), k2 = fdiv(t2, det);
    return {x.m - (a * k1 + c * k2), x.n - (b * k1 + d * k2)};
  }
  bool member(const LatticeVec& x) const {
    LatticeVec r = reduce(x);
    return r.m == 0 && r.n == 0;
  }
};

std::string ser(const LatticeVec& v) { return v.m.str() + "," + v.n.str(); }

struct LatticeVertex {
  bool inf = false;
  LatticeVec p;
};

LatticeVertex vert_inf() { return {true, {}}; }
LatticeVertex vert(LatticeVec p) { return {false, std::move(p)}; }

struct LatticeCell {
  std::array<LatticeVertex, 4> v;
  std::optional<ShapeParameter> shape;
};

LatticeVec residue(const LatticeVec& x, const Sub* sub) {
  return sub ? sub->reduce(x) : LatticeVec(0, 0);
}

bool translation_ok(const LatticeVec& t, const Sub* sub) {
  return sub == nullptr || sub->member(t);
}

// canonical key of a face under the available translations (the whole
// lattice, or the sublattice for covers)
std::string face_key(const std::array<LatticeVertex, 3>& f, const Sub* sub) {
  bool has_inf = f[0].inf || f[1].inf || f[2].inf;
  std::string best;
  for (int anchor = 0; anchor < 3; ++anchor) {
    if (f[anchor].inf) continue;
    LatticeVec shift = f[anchor].p - residue(f[anchor].p, sub);
    std::array<std::string, 3> parts;
    for (int i = 0; i < 3; ++i)
      parts[i] = f[i].inf ? std::string("inf") : ser(f[i].p - shift);
    std::sort(parts.begin(), parts.end());
    std::string key = parts[0] + "|" + parts[1] + "|" + parts[2];
    if (best.empty() || key < best) best = key;
  }
  return (has_inf ? "I:" : "F:") + best;
}

ShapeParameter cell_shape(const LatticeCell& c, const Frame& fr) {
  if (c.shape) return *c.shape;
  std::array<PPt, 4> p;
  for (int i = 0; i < 4; ++i)
    p[i] = c.v[i].inf ? at_infinity() : at(position(c.v[i].p, fr));
  BigC z = big_cross_ratio(p[0], p[1], p[2], p[3]);
  if (!(z.imag() > 0))
    fail(ErrorKind::NonGeometric, "cell is not positively oriented");
  return ShapeParameter(to_complex(z));
}

// Glues faces of the given lattice cells whenever they differ by an allowed
// translation; faces matched by nothing become boundary.
tri::IdealTriangulation assemble(const std::vector<LatticeCell>& cells, const Frame& fr,
                                 const Sub* sub) {
  tri::IdealTriangulation t;
  t.cells.resize(cells.size());

  struct Entry {
    int cell, face;
    std::array<int, 3> slots;
    std::array<LatticeVertex, 3> verts;
  };
  std::map<std::string, std::vector<Entry>> groups;
  for (int c = 0; c < int(cells.size()); ++c) {
    for (int f = 0; f < 4; ++f) {
      Entry e;
      e.cell = c;
      e.face = f;
      int k = 0;
      for (int s = 0; s < 4; ++s)
        if (s != f) {
          e.slots[k] = s;
          e.verts[k] = cells[c].v[s];
          ++k;
        }
      groups[face_key(e.verts, sub)].push_back(e);
    }
  }

  auto same_vertex = [](const LatticeVertex& a, const LatticeVec& t, const LatticeVertex& b) {
    if (a.inf || b.inf) return a.inf && b.inf;
    return a.p + t == b.p;
  };

  for (auto& [key, g] : groups) {
    if (g.size() == 1) continue;  // boundary face
    if (g.size() != 2)
      fail(ErrorKind::InconsistentInput, "face class matched " + std::to_string(g.size()) +
                                             " times: " + key);
    const Entry& e1 = g[0];
    const Entry& e2 = g[1];
    // find the translation t with e1 + t = e2 and the vertex bijection
    std::array<int, 3> match{-1, -1, -1};  // index into e2.verts per e1 vertex
    bool found = false;
    int a1 = -1;
    for (int i = 0; i < 3 && a1 < 0; ++i)
      if (!e1.verts[i].inf) a1 = i;
    for (int j = 0; j < 3 && !found; ++j) {
      if (e2.verts[j].inf) continue;
      LatticeVec tr = e2.verts[j].p - e1.verts[a1].p;
      if (!translation_ok(tr, sub)) continue;
      std::array<int, 3> m{-1, -1, -1};
      bool ok = true;
      for (int i = 0; i < 3 && ok; ++i) {
        m[i] = -1;
        for (int k = 0; k < 3; ++k)
          if (same_vertex(e1.verts[i], tr, e2.verts[k])) m[i] = k;
        ok = m[i] >= 0;
      }
      if (ok && m[0] != m[1] && m[1] != m[2] && m[0] != m[2]) {
        match = m;
        found = true;
      }
    }
    if (!found) fail(ErrorKind::InconsistentInput, "no translation matches face pair: " + key);

    tri::Perm4 perm;
    perm.img[e1.face] = e2.face;
    for (int i = 0; i < 3; ++i) perm.img[e1.slots[i]] = e2.slots[match[i]];
    t.cells[e1.cell].glue[e1.face] = {e2.cell, e2.face, perm};
    t.cells[e2.cell].glue[e2.face] = {e1.cell, e1.face, perm.inverse()};
  }

  // cusp 0 at infinity; thorn cusps indexed by lattice coset
  std::map<std::string, int> coset_index;
  for (int c = 0; c < int(cells.size()); ++c) {
    for (int s = 0; s < 4; ++s) {
      if (cells[c].v[s].inf) {
        t.cells[c].cusp[s] = 0;
      } else {
        std::string r = ser(residue(cells[c].v[s].p, sub));
        auto it = coset_index.find(r);
        if (it == coset_index.end())
          it = coset_index.emplace(r, int(coset_index.size())).first;
        t.cells[c].cusp[s] = 1 + it->second;
      }
    }
    t.cells[c].shape = cell_shape(cells[c], fr);
  }
  t.validate();
  return t;
}

}  // namespace

CuspLattice CuspLattice::reduce(Complex omega, double tol) {
  if (!(omega.imag() > tol))
    fail(ErrorKind::RealModulus, "lattice modulus must have positive imaginary part");
  for (int it = 0; it < 64; ++it) {
    // translate Re into (-1/2, 1/2], then invert if inside the unit circle
    double shift = std::ceil(omega.real() - 0.5);
    omega -= shift;
    if (std::abs(omega) < 1.0 - 1e-15) {
      omega = -1.0 / omega;
      continue;
    }
    break;
  }
  if (std::abs(omega.real()) > 0.5 + 1e-12 || std::abs(omega) < 1.0 - 1e-12)
    fail(ErrorKind::DegenerateInput, "lattice reduction did not converge");
  return CuspLattice{omega};
}

farey::Slope slope_of(const LatticeVec& v) {
  if (v.m == 0 && v.n == 0) fail(ErrorKind::DegenerateInput, "zero lattice vector has no slope");
  return farey::Slope(v.n, v.m);
}

Int vec_det(const LatticeVec& a, const LatticeVec& b) { return a.m * b.n - a.n * b.m; }

Complex lattice_position(const LatticeVec& v, const CuspLattice& lat) {
  return to_complex(position(v, framing(lat)));
}

farey::FareyTriangle DrilledAnanasState::triangle() const {
  return farey::FareyTriangle(slope_of(w1), slope_of(w2), slope_of(diagonal()));
}

ShapeParameter DrilledAnanasState::core_shape_1() const {
  // cross_ratio(inf, 0, w1, d) = d / w1
  Frame fr = framing(lattice);
  BigC z = position(diagonal(), fr) / position(w1, fr);
  return ShapeParameter(Complex(z.real().convert_to<double>(), z.imag().convert_to<double>()));
}

ShapeParameter DrilledAnanasState::core_shape_2() const {
  // cross_ratio(inf, 0, d, w2) = w2 / d
  Frame fr = framing(lattice);
  BigC z = position(w2, fr) / position(diagonal(), fr);
  return ShapeParameter(Complex(z.real().convert_to<double>(), z.imag().convert_to<double>()));
}

double DrilledAnanasState::core_volume() const {
  return hypgeom::tet_volume(core_shape_1()) + hypgeom::tet_volume(core_shape_2());
}

DrilledAnanasState build(const CuspLattice& lattice, const farey::FareyTriangle& triangle) {
  CuspLattice lat = CuspLattice::reduce(lattice.omega);

  // basis coordinates of the three slopes; the mediant vertex (canonical
  // vector equal to the sum of the other two) is the pleating diagonal
  std::array<LatticeVec, 3> v;
  for (int i = 0; i < 3; ++i) v[i] = LatticeVec(triangle.s[i].q, triangle.s[i].p);
  int mediant = -1;
  for (int k = 0; k < 3; ++k) {
    int i = (k + 1) % 3, j = (k + 2) % 3;
    if (v[i] + v[j] == v[k]) mediant = k;
  }
  if (mediant < 0)
    fail(ErrorKind::InconsistentInput, "no mediant vertex in triangle " + triangle.str());

  DrilledAnanasState a;
  a.lattice = lat;
  a.w1 = v[(mediant + 1) % 3];
  a.w2 = v[(mediant + 2) % 3];
  if (vec_det(a.w1, a.w2) < 0) std::swap(a.w1, a.w2);
  if (vec_det(a.w1, a.w2) != 1)
    fail(ErrorKind::InconsistentInput, "triangle sides are not unimodular");
  if (!a.core_shape_1().geometric() || !a.core_shape_2().geometric())
    fail(ErrorKind::NonGeometric, "core shapes not geometric (internal error)");
  return a;
}

std::array<double, 3> boundary_angles(const DrilledAnanasState& a) {
  // T = (inf, 0, w1, d): the boundary edge of slope(w1) is slots {1,2}
  // (parameter (z-1)/z), slope(w2) is {2,3} (parameter z), the diagonal is
  // {1,3} (parameter 1/(1-z)); T' contributes the same angle at each slope
  hypgeom::DihedralAngleTriple th = hypgeom::dihedral_angles(a.core_shape_1());
  return {2.0 * th.theta[2], 2.0 * th.theta[0], 2.0 * th.theta[1]};
}

std::pair<ShapeParameter, DrilledAnanasState> peel(const DrilledAnanasState& a,
                                                   const farey::Slope& s, double tol) {
  farey::FareyTriangle tr = a.triangle();
  int idx = tr.index_of(s);
  if (idx < 0)
    fail(ErrorKind::BadInput, "slope " + s.str() + " is not a boundary slope of " + tr.str());
  if (a.forbidden && s == *a.forbidden)
    fail(ErrorKind::ForbiddenEdge, "peeling " + s.str() + " would backtrack");
  double angle = boundary_angles(a)[idx];
  if (angle >= kPi - tol)
    fail(ErrorKind::AngleAtLeastPi,
         "internal angle at " + s.str() + " is " + std::to_string(angle));

  LatticeVec d = a.diagonal();
  DrilledAnanasState b;
  b.lattice = a.lattice;
  b.peeled = a.peeled;

  // quad cycle with the removed diagonal at positions 0-2
  std::array<LatticeVec, 4> quad;
  if (idx == 2) {  // peel the diagonal
    quad = {LatticeVec(0, 0), a.w1, d, a.w2};
    b.w1 = a.w2;
    b.w2 = -a.w1;
  } else if (idx == 0) {  // peel slope(w1)
    quad = {LatticeVec(0, 0), -a.w2, a.w1, d};
    b.w1 = d;
    b.w2 = a.w2;
  } else {  // peel slope(w2)
    quad = {LatticeVec(0, 0), d, a.w2, -a.w1};
    b.w1 = a.w1;
    b.w2 = d;
  }

  Frame fr = framing(a.lattice);
  std::array<PPt, 4> p;
  for (int i = 0; i < 4; ++i) p[i] = at(position(quad[i], fr));
  BigC z = big_cross_ratio(p[0], p[1], p[2], p[3]);
  if (z.imag() < 0) {  // orient the quad tetrahedron positively
    std::swap(quad[1], quad[3]);
    z = z / (z - 1);  // the cross-ratio after an odd slot swap
  }
  // deep peels flatten like 1/q^2, so only strict positivity (decided in
  // extended precision) is required here
  if (!(z.imag() > 0))
    fail(ErrorKind::NonGeometricResult, "peel tetrahedron is flat (internal error)");

  PeelRecord rec;
  rec.quad = quad;
  rec.shape = ShapeParameter(to_complex(z));
  rec.peeled = s;
  rec.created = slope_of(b.w1 + b.w2);
  b.peeled.push_back(rec);
  b.forbidden = rec.created;
  return {rec.shape, b};
}

tri::IdealTriangulation to_triangulation(const DrilledAnanasState& a) {
  std::vector<LatticeCell> cells;
  for (const PeelRecord& r : a.peeled) {
    LatticeCell c;
    for (int i = 0; i < 4; ++i) c.v[i] = vert(r.quad[i]);
    c.shape = r.shape;
    cells.push_back(c);
  }
  LatticeVec d = a.diagonal();
  LatticeCell t1, t2;
  t1.v = {vert_inf(), vert(LatticeVec(0, 0)), vert(a.w1), vert(d)};
  t2.v = {vert_inf(), vert(LatticeVec(0, 0)), vert(d), vert(a.w2)};
  cells.push_back(t1);
  cells.push_back(t2);
  return assemble(cells, framing(a.lattice), nullptr);
}

std::vector<DrilledAnanasState> tree_walk(const DrilledAnanasState& a0,
                                          const std::string& turns, double tol) {
  std::vector<DrilledAnanasState> out;
  out.push_back(a0);
  for (char ch : turns) {
    if (ch != 'L' && ch != 'R')
      fail(ErrorKind::BadInput, std::string("turn must be L or R, got '") + ch + "'");
    const DrilledAnanasState& a = out.back();
    farey::FareyTriangle tr = a.triangle();
    // candidate peels: everything except the forbidden slope (on the start
    // node, except the diagonal, matching the farey-module start rule)
    std::vector<int> cand;
    for (int i = 0; i < 3; ++i) {
      if (a.forbidden ? tr.s[i] == *a.forbidden : i == 2) continue;
      cand.push_back(i);
    }
    if (cand.size() != 2) fail(ErrorKind::InconsistentInput, "walk has no binary choice");

    LatticeVec d = a.diagonal();
    auto created = [&](int i) {
      if (i == 2) return slope_of(a.w2 - a.w1);
      if (i == 0) return slope_of(d + a.w2);
      return slope_of(a.w1 + d);
    };
    farey::Slope c0 = created(cand[0]), c1 = created(cand[1]);
    int pick;
    if (ch == 'R')
      pick = c0 < c1 ? cand[1] : cand[0];
    else
      pick = c0 < c1 ? cand[0] : cand[1];
    out.push_back(peel(a, tr.s[pick], tol).second);
  }
  return out;
}

tri::IdealTriangulation lift_to_cover(const DrilledAnanasState& a, const AnanasCover& c) {
  long det = c.a * c.d - c.b * c.c;
  if (det == 0) fail(ErrorKind::SingularMatrix, "cover matrix has determinant 0");
  Sub sub;
  if (det > 0) {
    sub = Sub{c.a, c.b, c.c, c.d, det};
  } else {
    sub = Sub{c.c, c.d, c.a, c.b, -det};  // swap columns to orient positively
  }

  // coset representatives of the sublattice
  std::vector<LatticeVec> reps;
  std::map<std::string, int> seen;
  for (long i = 0; i < sub.det && long(reps.size()) < sub.det; ++i)
    for (long j = 0; j < sub.det && long(reps.size()) < sub.det; ++j) {
      LatticeVec r = sub.reduce(LatticeVec(i, j));
      if (seen.emplace(ser(r), 1).second) reps.push_back(r);
    }
  if (long(reps.size()) != sub.det)
    fail(ErrorKind::InconsistentInput, "coset enumeration failed (internal error)");

  std::vector<LatticeCell> base;
  for (const PeelRecord& r : a.peeled) {
    LatticeCell cell;
    for (int i = 0; i < 4; ++i) cell.v[i] = vert(r.quad[i]);
    cell.shape = r.shape;
    base.push_back(cell);
  }
  LatticeVec d = a.diagonal();
  LatticeCell t1, t2;
  t1.v = {vert_inf(), vert(LatticeVec(0, 0)), vert(a.w1), vert(d)};
  t1.shape = a.core_shape_1();
  t2.v = {vert_inf(), vert(LatticeVec(0, 0)), vert(d), vert(a.w2)};
  t2.shape = a.core_shape_2();
  base.push_back(t1);
  base.push_back(t2);

  std::vector<LatticeCell> cells;
  for (const LatticeVec& r : reps)
    for (const LatticeCell& cell : base) {
      LatticeCell copy = cell;
      for (int i = 0; i < 4; ++i)
        if (!copy.v[i].inf) copy.v[i].p = copy.v[i].p + r;
      cells.push_back(copy);
    }
  return assemble(cells, framing(a.lattice), &sub);
}

std::string cellulation_svg(const DrilledAnanasState& a) {
  Frame fr = framing(a.lattice);
  auto pt = [&](const LatticeVec& v) {
    BigC p = position(v, fr);
    return Complex(p.real().convert_to<double>(), p.imag().convert_to<double>());
  };
  Complex p0(0.0), p1 = pt(a.w1), p2 = pt(a.w2), pd = pt(a.diagonal());

  double lo_x = std::min({p0.real(), p1.real(), p2.real(), pd.real()});
  double hi_x = std::max({p0.real(), p1.real(), p2.real(), pd.real()});
  double lo_y = std::min({p0.imag(), p1.imag(), p2.imag(), pd.imag()});
  double hi_y = std::max({p0.imag(), p1.imag(), p2.imag(), pd.imag()});
  double pad = 0.35 * std::max(hi_x - lo_x, hi_y - lo_y) + 0.5;
  lo_x -= pad, hi_x += pad, lo_y -= pad, hi_y += pad;
  double scale = 640.0 / std::max(hi_x - lo_x, hi_y - lo_y);
  auto X = [&](double x) { return (x - lo_x) * scale; };
  auto Y = [&](double y) { return (hi_y - y) * scale; };  // flip to screen coords

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << (hi_x - lo_x) * scale
      << "' height='" << (hi_y - lo_y) * scale << "'>\n";

  // lattice points of the ambient lattice Z + Z*omega
  Complex om = a.lattice.omega;
  int rng = int(std::ceil((std::abs(hi_x) + std::abs(hi_y) + std::abs(lo_x) + std::abs(lo_y)) /
                          std::max(0.5, om.imag()))) +
            2;
  for (int n = -rng; n <= rng; ++n)
    for (int m = -rng; m <= rng; ++m) {
      Complex p = double(m) + double(n) * om;
      if (p.real() < lo_x || p.real() > hi_x || p.imag() < lo_y || p.imag() > hi_y) continue;
      svg << "<circle cx='" << X(p.real()) << "' cy='" << Y(p.imag())
          << "' r='3' fill='#444'/>\n";
    }

  auto line = [&](Complex u, Complex v, const char* color) {
    svg << "<line x1='" << X(u.real()) << "' y1='" << Y(u.imag()) << "' x2='" << X(v.real())
        << "' y2='" << Y(v.imag()) << "' stroke='" << color << "' stroke-width='2'/>\n";
  };
  line(p0, p1, "#1f77b4");
  line(p1, pd, "#1f77b4");
  line(pd, p2, "#1f77b4");
  line(p2, p0, "#1f77b4");
  line(p0, pd, "#d62728");  // the pleating diagonal

  auto circumcircle = [&](Complex u, Complex v, Complex w) {
    // center equidistant from u, v, w
    double ax = u.real(), ay = u.imag(), bx = v.real(), by = v.imag();
    double cx = w.real(), cy = w.imag();
    double dd = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                 (cx * cx + cy * cy) * (ay - by)) /
                dd;
    double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                 (cx * cx + cy * cy) * (bx - ax)) /
                dd;
    double r = std::hypot(ax - ux, ay - uy);
    svg << "<circle cx='" << X(ux) << "' cy='" << Y(uy) << "' r='" << r * scale
        << "' fill='none' stroke='#2ca02c' stroke-width='1.5' stroke-dasharray='6 4'/>\n";
  };
  circumcircle(p0, p1, pd);
  circumcircle(p0, pd, p2);

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ananas
}  // namespace geotri
