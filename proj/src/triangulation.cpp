#include "geotri/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "geotri/errors.hpp"

namespace geotri {
namespace tri {

using hypgeom::IdealPoint;
using hypgeom::cross_ratio;
using hypgeom::dihedral_angles;
using hypgeom::kPi;
using hypgeom::solve_vertex;

Perm4 Perm4::inverse() const {
  Perm4 r;
  for (int i = 0; i < 4; i++) r.img[img[i]] = i;
  return r;
}

Perm4 Perm4::operator*(const Perm4& o) const {
  Perm4 r;
  for (int i = 0; i < 4; i++) r.img[i] = img[o.img[i]];
  return r;
}

bool Perm4::is_permutation() const {
  std::array<bool, 4> seen{false, false, false, false};
  for (int i : img) {
    if (i < 0 || i > 3 || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

bool IdealTriangulation::has_shapes() const {
  for (const auto& c : cells)
    if (!c.shape) return false;
  return !cells.empty();
}

void IdealTriangulation::validate() const {
  for (int c = 0; c < size(); c++) {
    for (int f = 0; f < 4; f++) {
      const Gluing& g = cells[c].glue[f];
      if (g.is_boundary()) continue;
      if (g.cell >= size() || g.face < 0 || g.face > 3)
        fail(ErrorKind::InconsistentInput,
             "cell " + std::to_string(c) + " face " + std::to_string(f) + ": bad gluing target");
      if (!g.perm.is_permutation())
        fail(ErrorKind::InconsistentInput,
             "cell " + std::to_string(c) + " face " + std::to_string(f) + ": not a permutation");
      if (g.perm(f) != g.face)
        fail(ErrorKind::InconsistentInput,
             "cell " + std::to_string(c) + " face " + std::to_string(f) +
                 ": permutation does not carry the face to its image");
      const Gluing& h = cells[g.cell].glue[g.face];
      if (h.cell != c || h.face != f || !(h.perm == g.perm.inverse()))
        fail(ErrorKind::InconsistentInput,
             "gluing involution broken at cell " + std::to_string(c) + " face " +
                 std::to_string(f));
    }
  }
  // cusp labels must be constant on vertex classes
  for (const auto& vc : vertex_classes()) {
    for (const auto& [c, v] : vc.vertices)
      if (cells[c].cusp[v] != vc.cusp)
        fail(ErrorKind::InconsistentInput,
             "cusp label mismatch at cell " + std::to_string(c) + " vertex " + std::to_string(v));
  }
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

int edge_index(int a, int b) {
  if (a > b) std::swap(a, b);
  static const std::map<std::pair<int, int>, int> idx = {
      {{0, 1}, 0}, {{0, 2}, 1}, {{0, 3}, 2}, {{1, 2}, 3}, {{1, 3}, 4}, {{2, 3}, 5}};
  return idx.at({a, b});
}

const std::array<std::pair<int, int>, 6> kEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace

std::vector<EdgeClass> IdealTriangulation::edge_classes() const {
  UnionFind uf(size() * 6);
  for (int c = 0; c < size(); c++) {
    for (int f = 0; f < 4; f++) {
      const Gluing& g = cells[c].glue[f];
      if (g.is_boundary()) continue;
      for (auto [a, b] : kEdges) {
        if (a == f || b == f) continue;
        uf.unite(c * 6 + edge_index(a, b), g.cell * 6 + edge_index(g.perm(a), g.perm(b)));
      }
    }
  }
  std::map<int, EdgeClass> classes;
  for (int c = 0; c < size(); c++) {
    for (auto [a, b] : kEdges) {
      int root = uf.find(c * 6 + edge_index(a, b));
      EdgeClass& ec = classes[root];
      ec.edges.emplace_back(c, a, b);
      for (int f = 0; f < 4; f++)
        if (f != a && f != b && cells[c].glue[f].is_boundary()) ec.interior = false;
    }
  }
  std::vector<EdgeClass> out;
  for (auto& [root, ec] : classes) out.push_back(std::move(ec));
  return out;
}

std::vector<VertexClass> IdealTriangulation::vertex_classes() const {
  UnionFind uf(size() * 4);
  for (int c = 0; c < size(); c++) {
    for (int f = 0; f < 4; f++) {
      const Gluing& g = cells[c].glue[f];
      if (g.is_boundary()) continue;
      for (int v = 0; v < 4; v++)
        if (v != f) uf.unite(c * 4 + v, g.cell * 4 + g.perm(v));
    }
  }
  std::map<int, VertexClass> classes;
  for (int c = 0; c < size(); c++)
    for (int v = 0; v < 4; v++) {
      VertexClass& vc = classes[uf.find(c * 4 + v)];
      vc.vertices.emplace_back(c, v);
      vc.cusp = cells[c].cusp[v];
    }
  std::vector<VertexClass> out;
  for (auto& [root, vc] : classes) out.push_back(std::move(vc));
  return out;
}

int IdealTriangulation::face_count() const {
  int n = 0;
  for (int c = 0; c < size(); c++)
    for (int f = 0; f < 4; f++) {
      const Gluing& g = cells[c].glue[f];
      if (g.is_boundary() || g.cell > c || (g.cell == c && g.face >= f)) n++;
    }
  return n;
}

int IdealTriangulation::euler_characteristic() const {
  return int(vertex_classes().size()) - int(edge_classes().size()) + face_count() - size();
}

double IdealTriangulation::volume() const {
  double v = 0.0;
  for (const auto& c : cells) {
    if (!c.shape) fail(ErrorKind::MissingShapes, "volume needs a shape on every cell");
    v += hypgeom::tet_volume(*c.shape);
  }
  return v;
}

Complex edge_parameter(const ShapeParameter& s, int a, int b) {
  switch (edge_index(a, b)) {
    case 0: case 5: return s.z;
    case 1: case 4: return 1.0 / (1.0 - s.z);
    default: return (s.z - 1.0) / s.z;
  }
}

std::string GeometricReport::summary() const {
  std::ostringstream ss;
  ss << (pass ? "geometric" : "NOT geometric");
  if (!nongeometric_cells.empty()) {
    ss << "; non-geometric cells:";
    for (int c : nongeometric_cells) ss << " " << c;
  }
  for (const auto& er : edges) {
    ss << "\n  " << (er.edge.interior ? "interior" : "boundary") << " edge (valence "
       << er.edge.edges.size() << ") angle sum " << std::setprecision(12) << er.angle_sum;
  }
  return ss.str();
}

GeometricReport verify_geometric(const IdealTriangulation& t, double tol, bool strict) {
  t.validate();
  GeometricReport rep;
  rep.pass = true;
  for (int c = 0; c < t.size(); c++) {
    if (!t.cells[c].shape) fail(ErrorKind::MissingShapes, "cell " + std::to_string(c));
    if (!t.cells[c].shape->geometric()) {
      rep.nongeometric_cells.push_back(c);
      rep.pass = false;
    }
  }
  for (auto& ec : t.edge_classes()) {
    EdgeReport er;
    er.edge = ec;
    for (const CellEdge& e : ec.edges) {
      Complex param = edge_parameter(*t.cells[e.cell].shape, e.a, e.b);
      er.angle_sum += std::arg(param);
      er.parameter_product *= param;
    }
    if (ec.interior) {
      if (std::abs(er.angle_sum - 2.0 * kPi) > tol) rep.pass = false;
      if (strict && std::abs(er.parameter_product - Complex(1.0)) > tol) rep.pass = false;
    }
    rep.edges.push_back(std::move(er));
  }
  return rep;
}

namespace {

// ---- local development: positions for a set of cells glued to each other

using Positions = std::map<int, std::array<IdealPoint, 4>>;

std::array<IdealPoint, 4> canonical_embedding(const ShapeParameter& s) {
  return {IdealPoint::infinity(), IdealPoint(0.0, 0.0), IdealPoint(1.0, 0.0), IdealPoint(s.z)};
}

// positions of cell c2 induced through the gluing of face f of cell c
std::array<IdealPoint, 4> develop_across(const IdealTriangulation& t, const Positions& pos,
                                         int c, int f) {
  const Gluing& g = t.cells[c].glue[f];
  std::array<IdealPoint, 4> p2;
  const auto& p = pos.at(c);
  for (int v = 0; v < 4; v++)
    if (v != f) p2[g.perm(v)] = p[v];
  if (!t.cells[g.cell].shape) fail(ErrorKind::MissingShapes, "cell " + std::to_string(g.cell));
  p2[g.face] = solve_vertex(t.cells[g.cell].shape->z, p2, g.face);
  return p2;
}

// ---- walking around an edge

struct EdgeStarEntry {
  int cell;
  int i, j;  // slots of the two edge endpoints, consistently oriented
  int k, l;  // k: equator vertex shared with the previous cell (= exit face),
             // l: equator vertex shared with the next cell (= entry face)
};

// cyclic star of an interior edge; throws BadValence on boundary or if the
// walk returns with the edge reversed (non-orientable star)
std::vector<EdgeStarEntry> walk_around_edge(const IdealTriangulation& t, int cell, int a, int b) {
  std::vector<EdgeStarEntry> star;
  int rest[2], n = 0;
  for (int v = 0; v < 4; v++)
    if (v != a && v != b) rest[n++] = v;
  EdgeStarEntry cur{cell, a, b, rest[0], rest[1]};
  for (;;) {
    star.push_back(cur);
    const Gluing& g = t.cells[cur.cell].glue[cur.k];
    if (g.is_boundary())
      fail(ErrorKind::BadValence, "edge star touches a boundary face");
    EdgeStarEntry next{g.cell, g.perm(cur.i), g.perm(cur.j), g.perm(cur.l), g.perm(cur.k)};
    if (next.cell == star[0].cell && next.k == star[0].k) {
      if (next.i != star[0].i || next.j != star[0].j)
        fail(ErrorKind::BadValence, "edge star closes up with reversed orientation");
      return star;
    }
    if (star.size() > t.cells.size() * 6u)
      fail(ErrorKind::InconsistentInput, "edge walk does not close");
    cur = next;
  }
}

// ---- rebuilding a triangulation after a local move

struct ExternalRef {
  int old_cell, old_face;
  Perm4 to_old;  // new-cell slots -> old-cell slots; to_old(face) = old_face
};

IdealTriangulation rebuild(const IdealTriangulation& t, const std::vector<int>& removed,
                           std::vector<Tetrahedron> new_cells,
                           const std::map<std::pair<int, int>, ExternalRef>& externals) {
  std::set<int> removed_set(removed.begin(), removed.end());
  std::vector<int> new_index(t.size(), -1);
  IdealTriangulation out;
  for (int c = 0; c < t.size(); c++) {
    if (removed_set.count(c)) continue;
    new_index[c] = out.size();
    out.cells.push_back(t.cells[c]);
  }
  int base = out.size();
  // survivor-to-survivor gluings just get reindexed; survivor-to-removed
  // entries are overwritten when the claiming new face is resolved below
  for (auto& cell : out.cells)
    for (auto& g : cell.glue)
      if (!g.is_boundary() && !removed_set.count(g.cell)) g.cell = new_index[g.cell];
  // inverse map: old external face -> (new cell, face)
  std::map<std::pair<int, int>, std::pair<int, int>> claimed;
  for (const auto& [nf, ref] : externals) {
    auto key = std::make_pair(ref.old_cell, ref.old_face);
    if (claimed.count(key)) fail(ErrorKind::InconsistentInput, "external face claimed twice");
    claimed[key] = nf;
  }
  for (const auto& [nf, ref] : externals) {
    auto [nc, f] = nf;
    const Gluing& g = t.cells[ref.old_cell].glue[ref.old_face];
    Gluing& slot = new_cells[nc].glue[f];
    if (g.is_boundary()) {
      slot = Gluing::boundary();
      continue;
    }
    Perm4 carried = g.perm * ref.to_old;  // new slots -> old partner slots
    if (!removed_set.count(g.cell)) {
      slot = Gluing{new_index[g.cell], g.face, carried};
      out.cells[new_index[g.cell]].glue[g.face] = Gluing{base + nc, f, carried.inverse()};
    } else {
      auto it = claimed.find({g.cell, g.face});
      if (it == claimed.end())
        fail(ErrorKind::InconsistentInput, "dangling gluing into the removed region");
      auto [nc2, f2] = it->second;
      Perm4 full = externals.at(it->second).to_old.inverse() * carried;
      if (full(f) != f2)
        fail(ErrorKind::InconsistentInput, "mismatched external face correspondence");
      slot = Gluing{base + nc2, f2, full};
    }
  }
  for (int nc = 0; nc < int(new_cells.size()); nc++) {
    for (int f = 0; f < 4; f++) {
      Gluing& g = new_cells[nc].glue[f];
      if (g.is_boundary()) continue;
      if (externals.count({nc, f})) continue;  // already holds a final index
      g.cell += base;                          // local new-cell index -> final index
    }
    out.cells.push_back(new_cells[nc]);
  }
  return out;
}

}  // namespace

IdealTriangulation pachner_23(const IdealTriangulation& t, const PachnerSite& site, bool force,
                              double tol) {
  t.validate();
  if (site.face < 0) fail(ErrorKind::BadInput, "2-3 site must be a face");
  int c0 = site.cell, f0 = site.face;
  if (c0 < 0 || c0 >= t.size()) fail(ErrorKind::BadInput, "site cell out of range");
  const Gluing& g = t.cells[c0].glue[f0];
  if (g.is_boundary()) fail(ErrorKind::BadInput, "site face is a boundary face");
  if (g.cell == c0) fail(ErrorKind::SameCell, "both sides of the face lie in one tetrahedron");
  int c1 = g.cell, f1 = g.face;
  const Perm4& sigma = g.perm;

  std::array<int, 3> fv;  // slots of the shared face in c0, increasing
  int n = 0;
  for (int v = 0; v < 4; v++)
    if (v != f0) fv[n++] = v;

  bool geometric = t.has_shapes() && !force;
  std::array<ShapeParameter, 3> new_shapes;
  bool apex_lo_is_c1 = true;  // which old cell's apex sits at slot 2 of the new cells
  if (geometric) {
    // convexity: along each equator edge the two old dihedral angles sum < pi
    for (int k = 0; k < 3; k++) {
      int a = fv[k], b = fv[(k + 1) % 3];
      double ang = std::arg(edge_parameter(*t.cells[c0].shape, a, b)) +
                   std::arg(edge_parameter(*t.cells[c1].shape, sigma(a), sigma(b)));
      if (ang >= kPi - tol)
        fail(ErrorKind::NotConvex, "equator angle sum " + std::to_string(ang) +
                                       " is not strictly below pi");
    }
    Positions pos;
    pos[c0] = canonical_embedding(*t.cells[c0].shape);
    auto p1 = develop_across(t, pos, c0, f0);
    IdealPoint apex0 = pos[c0][f0], apex1 = p1[f1];
    std::array<IdealPoint, 3> tv = {pos[c0][fv[0]], pos[c0][fv[1]], pos[c0][fv[2]]};
    // new cell k = (t_{k+1}, t_{k+2}, apex_lo, apex_hi); orientation fixes
    // which apex goes below
    auto shape_with = [&](int k, const IdealPoint& lo, const IdealPoint& hi) {
      return cross_ratio(tv[(k + 1) % 3], tv[(k + 2) % 3], lo, hi);
    };
    ShapeParameter probe = shape_with(0, apex1, apex0);
    apex_lo_is_c1 = probe.geometric();
    for (int k = 0; k < 3; k++) {
      new_shapes[k] = apex_lo_is_c1 ? shape_with(k, apex1, apex0) : shape_with(k, apex0, apex1);
      if (!new_shapes[k].geometric(tol))
        fail(ErrorKind::NotConvex, "new cell would be flat or negatively oriented");
    }
  }

  std::vector<Tetrahedron> nc(3);
  std::map<std::pair<int, int>, ExternalRef> ext;
  for (int k = 0; k < 3; k++) {
    int ik = fv[k], ik1 = fv[(k + 1) % 3], ik2 = fv[(k + 2) % 3];
    // cusp labels: slots (t_{k+1}, t_{k+2}, apex_lo, apex_hi)
    nc[k].cusp[0] = t.cells[c0].cusp[ik1];
    nc[k].cusp[1] = t.cells[c0].cusp[ik2];
    int cusp_c0_apex = t.cells[c0].cusp[f0], cusp_c1_apex = t.cells[c1].cusp[f1];
    nc[k].cusp[2] = apex_lo_is_c1 ? cusp_c1_apex : cusp_c0_apex;
    nc[k].cusp[3] = apex_lo_is_c1 ? cusp_c0_apex : cusp_c1_apex;
    if (geometric) nc[k].shape = new_shapes[k];
    // internal: face 0 of cell k <-> face 1 of cell k+1, swapping slots 0,1
    nc[k].glue[0] = Gluing{(k + 1) % 3, 1, Perm4{{1, 0, 2, 3}}};
    nc[k].glue[1] = Gluing{(k + 2) % 3, 0, Perm4{{1, 0, 2, 3}}};
    // external: face 2 is the old face of the apex_hi owner opposite t_k,
    // face 3 the old face of the apex_lo owner
    Perm4 to_c0;  // new slots -> c0 slots
    to_c0.img = {ik1, ik2, f0, ik};
    Perm4 to_c0_hi;  // variant when c0 owns the slot-3 apex
    to_c0_hi.img = {ik1, ik2, ik, f0};
    Perm4 to_c1;  // new slots -> c1 slots
    to_c1.img = {sigma(ik1), sigma(ik2), f1, sigma(ik)};
    Perm4 to_c1_hi;
    to_c1_hi.img = {sigma(ik1), sigma(ik2), sigma(ik), f1};
    if (apex_lo_is_c1) {
      ext[{k, 2}] = ExternalRef{c0, ik, to_c0_hi};
      ext[{k, 3}] = ExternalRef{c1, sigma(ik), to_c1};
    } else {
      ext[{k, 2}] = ExternalRef{c1, sigma(ik), to_c1_hi};
      ext[{k, 3}] = ExternalRef{c0, ik, to_c0};
    }
  }
  IdealTriangulation out = rebuild(t, {c0, c1}, std::move(nc), ext);
  if (force)
    for (auto& cell : out.cells) cell.shape.reset();
  out.validate();
  return out;
}

IdealTriangulation pachner_32(const IdealTriangulation& t, const PachnerSite& site, bool force,
                              double tol) {
  t.validate();
  if (site.edge_a < 0) fail(ErrorKind::BadInput, "3-2 site must be an edge");
  auto star = walk_around_edge(t, site.cell, site.edge_a, site.edge_b);
  if (star.size() != 3)
    fail(ErrorKind::BadValence,
         "edge has valence " + std::to_string(star.size()) + ", need 3");
  if (star[0].cell == star[1].cell || star[0].cell == star[2].cell ||
      star[1].cell == star[2].cell)
    fail(ErrorKind::DuplicateCell, "the three cells around the edge are not distinct");

  bool geometric = t.has_shapes() && !force;
  ShapeParameter zx, zy;
  bool top_is_a0 = true;  // which pole the (e0,e1,e2,apex) cell takes
  if (geometric) {
    Positions pos;
    pos[star[0].cell] = canonical_embedding(*t.cells[star[0].cell].shape);
    pos[star[1].cell] = develop_across(t, pos, star[0].cell, star[0].k);
    pos[star[2].cell] = develop_across(t, pos, star[1].cell, star[1].k);
    IdealPoint a0 = pos[star[0].cell][star[0].i], a1 = pos[star[0].cell][star[0].j];
    std::array<IdealPoint, 3> e;
    for (int s = 0; s < 3; s++) e[s] = pos[star[s].cell][star[s].k];
    ShapeParameter probe = cross_ratio(e[0], e[1], e[2], a0);
    top_is_a0 = probe.geometric();
    const IdealPoint& top = top_is_a0 ? a0 : a1;
    const IdealPoint& bot = top_is_a0 ? a1 : a0;
    zx = cross_ratio(e[0], e[1], e[2], top);
    zy = cross_ratio(e[1], e[0], e[2], bot);
    if (!zx.geometric(tol) || !zy.geometric(tol))
      fail(ErrorKind::NonGeometricResult, "3-2 move would create a flat cell");
  }

  // X = (e0, e1, e2, top), Y = (e1, e0, e2, bot)
  std::vector<Tetrahedron> nc(2);
  std::map<std::pair<int, int>, ExternalRef> ext;
  const auto& cusp_of = [&](int s, int slot) { return t.cells[star[s].cell].cusp[slot]; };
  int cusp_a0 = cusp_of(0, star[0].i), cusp_a1 = cusp_of(0, star[0].j);
  std::array<int, 3> cusp_e;
  for (int s = 0; s < 3; s++) cusp_e[s] = cusp_of(s, star[s].k);
  nc[0].cusp = {cusp_e[0], cusp_e[1], cusp_e[2], top_is_a0 ? cusp_a0 : cusp_a1};
  nc[1].cusp = {cusp_e[1], cusp_e[0], cusp_e[2], top_is_a0 ? cusp_a1 : cusp_a0};
  if (geometric) {
    nc[0].shape = zx;
    nc[1].shape = zy;
  }
  nc[0].glue[3] = Gluing{1, 3, Perm4{{1, 0, 2, 3}}};
  nc[1].glue[3] = Gluing{0, 3, Perm4{{1, 0, 2, 3}}};
  // X face m (m in 0..2) misses e_m: it lies over old cell c_{m+1}, and
  // carries the pole at slot 3
  static const std::array<int, 3> eY = {1, 0, 2};  // Y slot -> equator index
  for (int m = 0; m < 3; m++) {
    {
      int s = (m + 1) % 3;
      const EdgeStarEntry& st = star[s];
      int pole_slot = top_is_a0 ? st.i : st.j;   // slot of the apex X carries
      int other_pole = top_is_a0 ? st.j : st.i;  // face of the old cell used
      Perm4 p;
      p.img[(m + 1) % 3] = st.k;  // X's slot holding e_s
      p.img[(m + 2) % 3] = st.l;  // e_{s+1}
      p.img[3] = pole_slot;
      p.img[m] = other_pole;
      ext[{0, m}] = ExternalRef{st.cell, other_pole, p};
    }
    {
      int s = (eY[m] + 1) % 3;
      const EdgeStarEntry& st = star[s];
      int pole_slot = top_is_a0 ? st.j : st.i;
      int other_pole = top_is_a0 ? st.i : st.j;
      Perm4 p;
      // Y slots hold equator indices eY; invert to place e_s and e_{s+1}
      for (int yslot = 0; yslot < 3; yslot++) {
        if (eY[yslot] == s) p.img[yslot] = st.k;
        else if (eY[yslot] == (s + 1) % 3) p.img[yslot] = st.l;
      }
      p.img[3] = pole_slot;
      p.img[m] = other_pole;
      ext[{1, m}] = ExternalRef{st.cell, other_pole, p};
    }
  }
  IdealTriangulation out =
      rebuild(t, {star[0].cell, star[1].cell, star[2].cell}, std::move(nc), ext);
  if (force)
    for (auto& cell : out.cells) cell.shape.reset();
  out.validate();
  return out;
}

IdealTriangulation pachner_44(const IdealTriangulation& t, const PachnerSite& site, int diagonal,
                              bool force, double tol) {
  t.validate();
  if (site.edge_a < 0) fail(ErrorKind::BadInput, "4-4 site must be an edge");
  if (diagonal != 0 && diagonal != 1) fail(ErrorKind::BadInput, "diagonal must be 0 or 1");
  auto star = walk_around_edge(t, site.cell, site.edge_a, site.edge_b);
  if (star.size() != 4)
    fail(ErrorKind::BadValence,
         "edge has valence " + std::to_string(star.size()) + ", need 4");
  for (int s = 0; s < 4; s++)
    for (int r = s + 1; r < 4; r++)
      if (star[s].cell == star[r].cell)
        fail(ErrorKind::NotOctahedron, "edge star is not an embedded octahedron");
  // choosing the other diagonal is the same construction with the equator
  // rotated one step
  if (diagonal == 1) std::rotate(star.begin(), star.begin() + 1, star.end());

  bool geometric = t.has_shapes() && !force;
  std::array<ShapeParameter, 4> zs;
  bool top_is_a0 = true;
  if (geometric) {
    Positions pos;
    pos[star[0].cell] = canonical_embedding(*t.cells[star[0].cell].shape);
    for (int s = 0; s < 3; s++)
      pos[star[s + 1].cell] = develop_across(t, pos, star[s].cell, star[s].k);
    IdealPoint a0 = pos[star[0].cell][star[0].i], a1 = pos[star[0].cell][star[0].j];
    std::array<IdealPoint, 4> e;
    for (int s = 0; s < 4; s++) e[s] = pos[star[s].cell][star[s].k];
    ShapeParameter probe = cross_ratio(e[0], e[2], e[1], a0);
    top_is_a0 = probe.geometric();
    const IdealPoint& top = top_is_a0 ? a0 : a1;
    const IdealPoint& bot = top_is_a0 ? a1 : a0;
    zs[0] = cross_ratio(e[0], e[2], e[1], top);
    zs[1] = cross_ratio(e[2], e[0], e[3], top);
    zs[2] = cross_ratio(e[2], e[0], e[1], bot);
    zs[3] = cross_ratio(e[0], e[2], e[3], bot);
    for (const auto& z : zs)
      if (!z.geometric(tol))
        fail(ErrorKind::NonGeometricResult,
             "re-diagonalized octahedron has a flat or reversed cell");
  }

  // T0 = (e0,e2,e1,top), T1 = (e2,e0,e3,top), T2 = (e2,e0,e1,bot),
  // T3 = (e0,e2,e3,bot); all four internal gluings swap slots 0,1
  std::vector<Tetrahedron> nc(4);
  int cusp_a0 = t.cells[star[0].cell].cusp[star[0].i];
  int cusp_a1 = t.cells[star[0].cell].cusp[star[0].j];
  int cusp_top = top_is_a0 ? cusp_a0 : cusp_a1, cusp_bot = top_is_a0 ? cusp_a1 : cusp_a0;
  std::array<int, 4> cusp_e;
  for (int s = 0; s < 4; s++) cusp_e[s] = t.cells[star[s].cell].cusp[star[s].k];
  nc[0].cusp = {cusp_e[0], cusp_e[2], cusp_e[1], cusp_top};
  nc[1].cusp = {cusp_e[2], cusp_e[0], cusp_e[3], cusp_top};
  nc[2].cusp = {cusp_e[2], cusp_e[0], cusp_e[1], cusp_bot};
  nc[3].cusp = {cusp_e[0], cusp_e[2], cusp_e[3], cusp_bot};
  if (geometric)
    for (int k = 0; k < 4; k++) nc[k].shape = zs[k];
  Perm4 swap01{{1, 0, 2, 3}};
  nc[0].glue[2] = Gluing{1, 2, swap01};
  nc[1].glue[2] = Gluing{0, 2, swap01};
  nc[0].glue[3] = Gluing{2, 3, swap01};
  nc[2].glue[3] = Gluing{0, 3, swap01};
  nc[1].glue[3] = Gluing{3, 3, swap01};
  nc[3].glue[3] = Gluing{1, 3, swap01};
  nc[2].glue[2] = Gluing{3, 2, swap01};
  nc[3].glue[2] = Gluing{2, 2, swap01};

  // externals; c_s holds e_s at slot k, e_{s+1} at slot l, poles at i (a0), j (a1)
  auto top_slot = [&](const EdgeStarEntry& st) { return top_is_a0 ? st.i : st.j; };
  auto bot_slot = [&](const EdgeStarEntry& st) { return top_is_a0 ? st.j : st.i; };
  std::map<std::pair<int, int>, ExternalRef> ext;
  auto add_ext = [&](int ncell, int nface, int s, bool with_top, std::array<int, 4> slot_map) {
    // slot_map: for each new-cell slot, the old slot in star[s] (already built
    // by the caller)
    Perm4 p;
    p.img = slot_map;
    int old_face = with_top ? bot_slot(star[s]) : top_slot(star[s]);
    p.img[nface] = old_face;
    ext[{ncell, nface}] = ExternalRef{star[s].cell, old_face, p};
  };
  // T0 face0: (e2,e1,top) over c_1 {e1=k,e2=l}; face1: (e0,e1,top) over c_0
  add_ext(0, 0, 1, true, {-1, star[1].l, star[1].k, top_slot(star[1])});
  add_ext(0, 1, 0, true, {star[0].k, -1, star[0].l, top_slot(star[0])});
  // T1 face0: (e0,e3,top) over c_3 {e3=k,e0=l}; face1: (e2,e3,top) over c_2
  add_ext(1, 0, 3, true, {-1, star[3].l, star[3].k, top_slot(star[3])});
  add_ext(1, 1, 2, true, {star[2].k, -1, star[2].l, top_slot(star[2])});
  // T2 face0: (e0,e1,bot) over c_0; face1: (e2,e1,bot) over c_1
  add_ext(2, 0, 0, false, {-1, star[0].k, star[0].l, bot_slot(star[0])});
  add_ext(2, 1, 1, false, {star[1].l, -1, star[1].k, bot_slot(star[1])});
  // T3 face0: (e2,e3,bot) over c_2; face1: (e0,e3,bot) over c_3
  add_ext(3, 0, 2, false, {-1, star[2].k, star[2].l, bot_slot(star[2])});
  add_ext(3, 1, 3, false, {star[3].l, -1, star[3].k, bot_slot(star[3])});

  IdealTriangulation out = rebuild(
      t, {star[0].cell, star[1].cell, star[2].cell, star[3].cell}, std::move(nc), ext);
  if (force)
    for (auto& cell : out.cells) cell.shape.reset();
  out.validate();
  return out;
}

bool isomorphic(const IdealTriangulation& t1, const IdealTriangulation& t2) {
  if (t1.size() != t2.size()) return false;
  if (t1.size() == 0) return true;
  std::vector<Perm4> all_perms;
  {
    std::array<int, 4> v{0, 1, 2, 3};
    do {
      Perm4 p;
      p.img = v;
      all_perms.push_back(p);
    } while (std::next_permutation(v.begin(), v.end()));
  }
  for (int seed = 0; seed < t2.size(); seed++) {
    for (const Perm4& p0 : all_perms) {
      std::vector<int> image(t1.size(), -1);
      std::vector<Perm4> perm(t1.size());
      std::vector<bool> used(t2.size(), false);
      image[0] = seed;
      perm[0] = p0;
      used[seed] = true;
      std::vector<int> queue = {0};
      bool ok = true;
      size_t covered = 1;
      for (size_t qi = 0; ok && qi < queue.size(); qi++) {
        int u = queue[qi];
        for (int f = 0; f < 4 && ok; f++) {
          const Gluing& g = t1.cells[u].glue[f];
          const Gluing& h = t2.cells[image[u]].glue[perm[u](f)];
          if (g.is_boundary() != h.is_boundary()) {
            ok = false;
            break;
          }
          if (g.is_boundary()) continue;
          Perm4 induced = h.perm * perm[u] * g.perm.inverse();
          if (image[g.cell] < 0) {
            if (used[h.cell]) {
              ok = false;
              break;
            }
            image[g.cell] = h.cell;
            perm[g.cell] = induced;
            used[h.cell] = true;
            covered++;
            queue.push_back(g.cell);
          } else if (image[g.cell] != h.cell || !(perm[g.cell] == induced)) {
            ok = false;
          }
        }
      }
      if (ok && covered == size_t(t1.size())) return true;
    }
  }
  return false;
}

void write_triangulation(const IdealTriangulation& t, std::ostream& out) {
  out << "tri 1\n";
  out << "cells " << t.size() << "\n";
  out << std::setprecision(17);
  for (int c = 0; c < t.size(); c++) {
    const Tetrahedron& cell = t.cells[c];
    out << "cell " << c << "\n";
    for (int f = 0; f < 4; f++) {
      const Gluing& g = cell.glue[f];
      if (g.is_boundary()) {
        out << "glue " << f << " boundary\n";
      } else {
        out << "glue " << f << " " << g.cell << " " << g.face << " : " << g.perm(0) << " "
            << g.perm(1) << " " << g.perm(2) << " " << g.perm(3) << "\n";
      }
    }
    out << "cusp " << cell.cusp[0] << " " << cell.cusp[1] << " " << cell.cusp[2] << " "
        << cell.cusp[3] << "\n";
    if (cell.shape)
      out << "shape " << cell.shape->z.real() << " " << cell.shape->z.imag() << "\n";
  }
}

void write_triangulation(const IdealTriangulation& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::BadInput, "cannot open " + path + " for writing");
  write_triangulation(t, out);
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

}  // namespace

IdealTriangulation read_triangulation(std::istream& in) {
  IdealTriangulation t;
  std::string line;
  int lineno = 0, ncells = -1, cur = -1;
  auto next_tokens = [&](std::vector<std::string>& toks) {
    while (std::getline(in, line)) {
      lineno++;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      toks.assign(std::istream_iterator<std::string>(ss), std::istream_iterator<std::string>());
      if (!toks.empty()) return true;
    }
    return false;
  };
  std::vector<std::string> toks;
  if (!next_tokens(toks) || toks.size() != 2 || toks[0] != "tri" || toks[1] != "1")
    parse_fail(lineno, "expected header 'tri 1'");
  if (!next_tokens(toks) || toks.size() != 2 || toks[0] != "cells")
    parse_fail(lineno, "expected 'cells N'");
  try {
    ncells = std::stoi(toks[1]);
  } catch (const std::exception&) {
    parse_fail(lineno, "bad cell count");
  }
  if (ncells < 0) parse_fail(lineno, "negative cell count");
  t.cells.resize(ncells);
  while (next_tokens(toks)) {
    try {
      if (toks[0] == "cell") {
        if (toks.size() != 2) parse_fail(lineno, "expected 'cell K'");
        cur = std::stoi(toks[1]);
        if (cur < 0 || cur >= ncells) parse_fail(lineno, "cell index out of range");
      } else if (toks[0] == "glue") {
        if (cur < 0) parse_fail(lineno, "'glue' before any 'cell'");
        if (toks.size() == 3 && toks[2] == "boundary") {
          t.cells[cur].glue[std::stoi(toks[1])] = Gluing::boundary();
        } else if (toks.size() == 9 && toks[4] == ":") {
          int f = std::stoi(toks[1]);
          if (f < 0 || f > 3) parse_fail(lineno, "face index out of range");
          Gluing g;
          g.cell = std::stoi(toks[2]);
          g.face = std::stoi(toks[3]);
          for (int v = 0; v < 4; v++) g.perm.img[v] = std::stoi(toks[5 + v]);
          if (!g.perm.is_permutation()) parse_fail(lineno, "not a permutation");
          t.cells[cur].glue[f] = g;
        } else {
          parse_fail(lineno, "expected 'glue F boundary' or 'glue F C F2 : a b c d'");
        }
      } else if (toks[0] == "cusp") {
        if (cur < 0 || toks.size() != 5) parse_fail(lineno, "expected 'cusp a b c d'");
        for (int v = 0; v < 4; v++) t.cells[cur].cusp[v] = std::stoi(toks[1 + v]);
      } else if (toks[0] == "shape") {
        if (cur < 0 || toks.size() != 3) parse_fail(lineno, "expected 'shape re im'");
        t.cells[cur].shape = ShapeParameter(Complex(std::stod(toks[1]), std::stod(toks[2])));
      } else {
        parse_fail(lineno, "unknown directive '" + toks[0] + "'");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      parse_fail(lineno, "malformed number");
    }
  }
  try {
    t.validate();
  } catch (const Error& e) {
    fail(ErrorKind::ParseError, std::string("triangulation fails validation: ") + e.what());
  }
  return t;
}

IdealTriangulation read_triangulation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  return read_triangulation(in);
}

}  // namespace tri
}  // namespace geotri
