#include "geotri/coning.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "geotri/errors.hpp"

namespace geotri {
namespace coning {

namespace {

std::pair<int, int> sorted_pair(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::array<int, 3> sorted_triple(int a, int b, int c) {
  std::array<int, 3> t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

// cross-ratio of four ideal points, (inf, 0, 1, z) -> z
Complex cross_ratio(const IdealPoint& a, const IdealPoint& b, const IdealPoint& c,
                    const IdealPoint& d) {
  auto diff = [](const IdealPoint& x, const IdealPoint& y) -> Complex {
    // projective determinant of the pair; infinity = (1, 0)
    if (x.inf && y.inf) return Complex(0.0, 0.0);
    if (x.inf) return Complex(1.0, 0.0);
    if (y.inf) return Complex(-1.0, 0.0);
    return x.z - y.z;
  };
  Complex den = diff(c, b) * diff(d, a);
  if (den == Complex(0.0, 0.0)) fail(ErrorKind::DegenerateInput, "coincident ideal vertices");
  return diff(c, a) * diff(d, b) / den;
}

}  // namespace

bool Polyhedron::has_edge(int a, int b) const {
  for (const auto& f : faces) {
    int n = int(f.size());
    for (int i = 0; i < n; ++i) {
      int x = f[i], y = f[(i + 1) % n];
      if ((x == a && y == b) || (x == b && y == a)) return true;
    }
  }
  return false;
}

void PolyComplex::validate() const {
  for (size_t c = 0; c < cells.size(); ++c) {
    const Polyhedron& p = cells[c];
    std::string where = "cell " + std::to_string(c);
    if (p.vertex_count() < 4) fail(ErrorKind::BadInput, where + ": too few vertices");
    if (p.has_positions() && int(p.pos.size()) != p.vertex_count())
      fail(ErrorKind::BadInput, where + ": positions do not match vertices");
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& f : p.faces) {
      if (f.size() < 3) fail(ErrorKind::BadInput, where + ": face with fewer than 3 vertices");
      std::set<int> seen;
      for (int v : f) {
        if (v < 0 || v >= p.vertex_count()) fail(ErrorKind::BadInput, where + ": bad vertex index");
        if (!seen.insert(v).second) fail(ErrorKind::BadInput, where + ": repeated face vertex");
      }
      for (size_t i = 0; i < f.size(); ++i)
        ++edge_count[sorted_pair(f[i], f[(i + 1) % f.size()])];
    }
    for (const auto& [e, k] : edge_count)
      if (k != 2)
        fail(ErrorKind::InconsistentInput,
             where + ": edge {" + std::to_string(e.first) + "," + std::to_string(e.second) +
                 "} lies in " + std::to_string(k) + " faces");
  }

  std::set<std::pair<int, int>> glued;
  for (size_t g = 0; g < gluings.size(); ++g) {
    const FaceGluing& fg = gluings[g];
    std::string where = "gluing " + std::to_string(g);
    auto side_ok = [&](int cell, int face) {
      return cell >= 0 && cell < int(cells.size()) && face >= 0 &&
             face < int(cells[cell].faces.size());
    };
    if (!side_ok(fg.cell_a, fg.face_a) || !side_ok(fg.cell_b, fg.face_b))
      fail(ErrorKind::BadInput, where + ": face reference out of range");
    const auto& fa = cells[fg.cell_a].faces[fg.face_a];
    const auto& fb = cells[fg.cell_b].faces[fg.face_b];
    int n = int(fa.size());
    if (int(fb.size()) != n || int(fg.vmap.size()) != n)
      fail(ErrorKind::InconsistentInput, where + ": face sizes do not match");
    std::set<int> image(fg.vmap.begin(), fg.vmap.end());
    if (int(image.size()) != n || *image.begin() != 0 || *image.rbegin() != n - 1)
      fail(ErrorKind::InconsistentInput, where + ": vertex map is not a bijection");
    for (int i = 0; i < n; ++i) {
      int d = (fg.vmap[(i + 1) % n] - fg.vmap[i] + n) % n;
      if (d != 1 && d != n - 1)
        fail(ErrorKind::InconsistentInput, where + ": vertex map breaks face adjacency");
      if (cells[fg.cell_a].cusp[fa[i]] != cells[fg.cell_b].cusp[fb[fg.vmap[i]]])
        fail(ErrorKind::InconsistentInput, where + ": cusp labels disagree across the face");
    }
    if (!glued.insert({fg.cell_a, fg.face_a}).second ||
        !glued.insert({fg.cell_b, fg.face_b}).second)
      fail(ErrorKind::InconsistentInput, where + ": face glued twice");
  }
}

bool CuspOrder::lt(int a, int b) const {
  auto it = above.find(a);
  return it != above.end() && it->second.count(b) > 0;
}

CuspOrder CuspOrder::from_edges(const std::vector<std::pair<int, int>>& edges) {
  CuspOrder o;
  std::set<int> labels;
  for (const auto& [a, b] : edges) {
    o.above[a].insert(b);
    labels.insert(a);
    labels.insert(b);
  }
  // transitive closure
  for (int k : labels)
    for (int a : labels) {
      if (!o.lt(a, k)) continue;
      auto it = o.above.find(k);
      if (it != o.above.end()) o.above[a].insert(it->second.begin(), it->second.end());
    }
  for (int a : labels)
    if (o.lt(a, a))
      fail(ErrorKind::InconsistentInput,
           "order has a cycle through label " + std::to_string(a));
  return o;
}

CuspOrder CuspOrder::total(const std::vector<int>& chain) {
  std::vector<std::pair<int, int>> edges;
  for (size_t i = 0; i + 1 < chain.size(); ++i) edges.push_back({chain[i], chain[i + 1]});
  return from_edges(edges);
}

CuspOrder CuspOrder::blue(const std::vector<int>& chain, const std::vector<int>& blue) {
  std::vector<std::pair<int, int>> edges;
  for (size_t i = 0; i + 1 < chain.size(); ++i) edges.push_back({chain[i], chain[i + 1]});
  if (!chain.empty())
    for (int b : blue) edges.push_back({chain.back(), b});
  return from_edges(edges);
}

std::optional<int> minimal_vertex(const Polyhedron& p, const std::vector<int>& subset,
                                  const CuspOrder& o) {
  std::vector<int> minima;
  for (int v : subset) {
    bool minimal = true;
    for (int u : subset)
      if (u != v && o.lt(p.cusp[u], p.cusp[v])) minimal = false;
    if (minimal) minima.push_back(v);
  }
  if (minima.size() == 1) return minima[0];
  return std::nullopt;
}

std::optional<int> minimal_vertex(const Polyhedron& p, const CuspOrder& o) {
  std::vector<int> all(p.vertex_count());
  for (int i = 0; i < p.vertex_count(); ++i) all[i] = i;
  return minimal_vertex(p, all, o);
}

PyramidDecomposition iterated_cone(const PolyComplex& c, const CuspOrder& o) {
  c.validate();
  PyramidDecomposition out;
  out.source = c;

  for (size_t ci = 0; ci < c.cells.size(); ++ci) {
    const Polyhedron& p = c.cells[ci];
    std::optional<int> apex = minimal_vertex(p, o);
    if (!apex)
      fail(ErrorKind::NoUniqueMinimum,
           "cell " + std::to_string(ci) + " has no unique minimal vertex");
    for (size_t fi = 0; fi < p.faces.size(); ++fi) {
      const auto& f = p.faces[fi];
      if (std::find(f.begin(), f.end(), *apex) != f.end()) continue;  // lateral face
      std::optional<int> w = minimal_vertex(p, f, o);
      if (w) {
        int n = int(f.size());
        for (int i = 0; i < n; ++i) {
          int a = f[i], b = f[(i + 1) % n];
          if (a == *w || b == *w) continue;
          out.pyramids.push_back({int(ci), *apex, int(fi), {*w, a, b}});
        }
      } else {
        out.pyramids.push_back({int(ci), *apex, int(fi), f});
      }
    }
  }

  // explicit face-consistency audit: both sides of every gluing must induce
  // the same subdivision (undivided, or coned from matching minima)
  for (size_t g = 0; g < c.gluings.size(); ++g) {
    const FaceGluing& fg = c.gluings[g];
    const auto& fa = c.cells[fg.cell_a].faces[fg.face_a];
    const auto& fb = c.cells[fg.cell_b].faces[fg.face_b];
    std::optional<int> wa = minimal_vertex(c.cells[fg.cell_a], fa, o);
    std::optional<int> wb = minimal_vertex(c.cells[fg.cell_b], fb, o);
    if (wa.has_value() != wb.has_value())
      fail(ErrorKind::InconsistentInput,
           "gluing " + std::to_string(g) + ": subdivision cases disagree");
    FaceCase fc;
    fc.gluing = int(g);
    fc.kase = wa ? 2 : 1;
    if (wa) {
      fc.w_a = *wa;
      fc.w_b = *wb;
      int pa = int(std::find(fa.begin(), fa.end(), *wa) - fa.begin());
      if (fb[fg.vmap[pa]] != *wb)
        fail(ErrorKind::InconsistentInput,
             "gluing " + std::to_string(g) + ": minimal vertices do not correspond");
    }
    out.face_cases.push_back(fc);
  }
  return out;
}

namespace {

struct ProtoTet {
  int cell;
  std::array<int, 4> v;  // slot 0 is the apex
  std::optional<hypgeom::ShapeParameter> shape;
};

// triangles lying on a face of the source complex, for cross-cell matching
struct OnFace {
  std::array<int, 3> triple;  // sorted cell-vertex indices
  int tet, slot;
};

}  // namespace

tri::IdealTriangulation choose_diagonals(
    const PyramidDecomposition& pd, const std::map<std::pair<int, int>, int>& choice) {
  const PolyComplex& c = pd.source;

  // resolve the fan corner of every undivided non-triangular face, keeping
  // the two sides of a gluing matched under the vertex map
  std::map<std::pair<int, int>, int> corner;  // (cell, face) -> cycle position
  auto pick = [&](int cell, int face) -> std::optional<int> {
    auto it = choice.find({cell, face});
    if (it == choice.end()) return std::nullopt;
    int n = int(c.cells[cell].faces[face].size());
    if (it->second < 0 || it->second >= n)
      fail(ErrorKind::BadInput, "diagonal choice out of range");
    return it->second;
  };
  for (const FaceGluing& fg : c.gluings) {
    std::optional<int> ca = pick(fg.cell_a, fg.face_a), cb = pick(fg.cell_b, fg.face_b);
    if (cb && !ca) {
      int n = int(fg.vmap.size());
      ca = int(std::find(fg.vmap.begin(), fg.vmap.end(), *cb) - fg.vmap.begin()) % n;
    }
    corner[{fg.cell_a, fg.face_a}] = ca.value_or(0);
    corner[{fg.cell_b, fg.face_b}] = fg.vmap[ca.value_or(0)];
  }

  std::vector<ProtoTet> tets;
  std::map<std::pair<int, int>, std::vector<OnFace>> on_face;  // (cell, face) -> triangles
  std::map<std::pair<int, std::pair<int, int>>, std::vector<std::pair<int, int>>>
      lateral;  // (cell, base edge) -> (tet, base slot pair encoded by missing slot)

  auto emit = [&](int cell, int apex, int base_face, std::array<int, 3> base) {
    const Polyhedron& p = c.cells[cell];
    ProtoTet t{cell, {apex, base[0], base[1], base[2]}, std::nullopt};
    if (p.has_positions()) {
      Complex z = cross_ratio(p.pos[t.v[0]], p.pos[t.v[1]], p.pos[t.v[2]], p.pos[t.v[3]]);
      if (z.imag() < 0) {  // orient positively; swapping the last two slots inverts z
        std::swap(t.v[2], t.v[3]);
        z = 1.0 / z;
      }
      t.shape = hypgeom::ShapeParameter(z);
    }
    int id = int(tets.size());
    tets.push_back(t);
    on_face[{cell, base_face}].push_back(
        {sorted_triple(t.v[1], t.v[2], t.v[3]), id, 0});
    for (int s = 1; s <= 3; ++s) {
      int x = t.v[s == 1 ? 2 : 1], y = t.v[s == 3 ? 2 : 3];
      lateral[{cell, sorted_pair(x, y)}].push_back({id, s});
    }
  };

  for (const Pyramid& pyr : pd.pyramids) {
    int n = int(pyr.base.size());
    if (n == 3) {
      emit(pyr.cell, pyr.apex, pyr.base_face, {pyr.base[0], pyr.base[1], pyr.base[2]});
      continue;
    }
    auto it = corner.find({pyr.cell, pyr.base_face});
    if (it == corner.end()) {
      // an undivided non-triangular face must be shared by exactly two
      // pyramids, forming a bipyramid
      fail(ErrorKind::InconsistentInput,
           "non-triangular face " + std::to_string(pyr.base_face) + " of cell " +
               std::to_string(pyr.cell) + " is not shared by two pyramids");
    }
    int c0 = it->second;
    for (int i = 1; i + 1 < n; ++i)
      emit(pyr.cell, pyr.apex, pyr.base_face,
           {pyr.base[c0], pyr.base[(c0 + i) % n], pyr.base[(c0 + i + 1) % n]});
  }

  tri::IdealTriangulation out;
  out.cells.resize(tets.size());
  for (size_t i = 0; i < tets.size(); ++i) {
    for (int s = 0; s < 4; ++s) out.cells[i].cusp[s] = c.cells[tets[i].cell].cusp[tets[i].v[s]];
    out.cells[i].shape = tets[i].shape;
  }

  auto slot_of = [&](int tet, int vertex) {
    for (int s = 0; s < 4; ++s)
      if (tets[tet].v[s] == vertex) return s;
    fail(ErrorKind::InconsistentInput, "vertex not on tetrahedron");
    return -1;
  };
  auto glue_pair = [&](int t1, int s1, int t2, int s2,
                       const std::map<int, int>& vmap_1to2) {
    tri::Perm4 p12, p21;
    for (int s = 0; s < 4; ++s) {
      int j = s == s1 ? s2 : slot_of(t2, vmap_1to2.at(tets[t1].v[s]));
      p12.img[s] = j;
      p21.img[j] = s;
    }
    out.cells[t1].glue[s1] = {t2, s2, p12};
    out.cells[t2].glue[s2] = {t1, s1, p21};
  };

  // internal gluings: lateral triangles over the same base edge (or face
  // diagonal) pair up within a cell
  for (const auto& [key, occ] : lateral) {
    if (occ.size() == 2) {
      std::map<int, int> idmap;
      for (int s = 0; s < 4; ++s) idmap[tets[occ[0].first].v[s]] = tets[occ[0].first].v[s];
      glue_pair(occ[0].first, occ[0].second, occ[1].first, occ[1].second, idmap);
    } else if (occ.size() == 1) {
      // the triangle lies on the face of the cell containing the apex and
      // this edge; register it for cross-cell matching
      int cell = key.first, x = key.second.first, y = key.second.second;
      int tet = occ[0].first, slot = occ[0].second;
      int apex = tets[tet].v[0];
      const Polyhedron& p = c.cells[cell];
      int host = -1;
      for (size_t fi = 0; fi < p.faces.size(); ++fi) {
        const auto& f = p.faces[fi];
        if (std::find(f.begin(), f.end(), apex) == f.end()) continue;
        int n = int(f.size());
        for (int i = 0; i < n; ++i) {
          int a = f[i], b = f[(i + 1) % n];
          if (sorted_pair(a, b) == sorted_pair(x, y)) host = int(fi);
        }
      }
      if (host < 0)
        fail(ErrorKind::InconsistentInput, "dangling lateral triangle (internal error)");
      on_face[{cell, host}].push_back({sorted_triple(apex, x, y), tet, slot});
    } else {
      fail(ErrorKind::InconsistentInput, "overmatched lateral triangle (internal error)");
    }
  }

  // cross-cell gluings: match the induced face triangulations
  for (const FaceGluing& fg : c.gluings) {
    const auto& fa = c.cells[fg.cell_a].faces[fg.face_a];
    const auto& fb = c.cells[fg.cell_b].faces[fg.face_b];
    std::map<int, int> vmap;
    for (size_t i = 0; i < fa.size(); ++i) vmap[fa[i]] = fb[fg.vmap[i]];
    auto& side_a = on_face[{fg.cell_a, fg.face_a}];
    auto& side_b = on_face[{fg.cell_b, fg.face_b}];
    if (side_a.size() != side_b.size())
      fail(ErrorKind::InconsistentInput, "face subdivisions disagree across a gluing");
    for (const OnFace& ta : side_a) {
      std::array<int, 3> img =
          sorted_triple(vmap.at(ta.triple[0]), vmap.at(ta.triple[1]), vmap.at(ta.triple[2]));
      const OnFace* match = nullptr;
      for (const OnFace& tb : side_b)
        if (tb.triple == img) match = &tb;
      if (!match)
        fail(ErrorKind::InconsistentInput, "face subdivisions disagree across a gluing");
      glue_pair(ta.tet, ta.slot, match->tet, match->slot, vmap);
    }
  }

  out.validate();
  return out;
}

std::vector<ReturningDiagonal> returning_diagonals(const PolyComplex& c) {
  std::vector<ReturningDiagonal> out;
  for (size_t ci = 0; ci < c.cells.size(); ++ci) {
    const Polyhedron& p = c.cells[ci];
    for (int a = 0; a < p.vertex_count(); ++a)
      for (int b = a + 1; b < p.vertex_count(); ++b)
        if (p.cusp[a] == p.cusp[b] && !p.has_edge(a, b))
          out.push_back({int(ci), a, b});
  }
  return out;
}

void write_complex(const PolyComplex& c, std::ostream& out) {
  out << "poly 1\n";
  out << "cells " << c.cells.size() << "\n";
  out << std::setprecision(17);
  for (size_t ci = 0; ci < c.cells.size(); ++ci) {
    const Polyhedron& p = c.cells[ci];
    out << "cell " << ci << "\n";
    out << "cusps";
    for (int l : p.cusp) out << " " << l;
    out << "\n";
    if (p.has_positions()) {
      out << "pos";
      for (const IdealPoint& q : p.pos) {
        if (q.inf)
          out << " inf";
        else
          out << " " << q.z.real() << "," << q.z.imag();
      }
      out << "\n";
    }
    for (const auto& f : p.faces) {
      out << "face";
      for (int v : f) out << " " << v;
      out << "\n";
    }
  }
  out << "gluings " << c.gluings.size() << "\n";
  for (const FaceGluing& g : c.gluings) {
    out << "glue " << g.cell_a << " " << g.face_a << " " << g.cell_b << " " << g.face_b
        << " :";
    for (int m : g.vmap) out << " " << m;
    out << "\n";
  }
}

PolyComplex read_complex(std::istream& in) {
  PolyComplex c;
  std::string line;
  auto next_tokens = [&](std::vector<std::string>& toks) {
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      toks.clear();
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (!toks.empty() && toks[0][0] != '#') return true;
    }
    return false;
  };
  std::vector<std::string> toks;
  if (!next_tokens(toks) || toks.size() != 2 || toks[0] != "poly" || toks[1] != "1")
    fail(ErrorKind::ParseError, "expected 'poly 1' header");
  if (!next_tokens(toks) || toks.size() != 2 || toks[0] != "cells")
    fail(ErrorKind::ParseError, "expected cell count");
  c.cells.resize(std::stoul(toks[1]));
  int cur = -1;
  while (next_tokens(toks)) {
    if (toks[0] == "cell") {
      cur = std::stoi(toks[1]);
      if (cur < 0 || cur >= int(c.cells.size())) fail(ErrorKind::ParseError, "bad cell index");
    } else if (toks[0] == "cusps") {
      for (size_t i = 1; i < toks.size(); ++i) c.cells[cur].cusp.push_back(std::stoi(toks[i]));
    } else if (toks[0] == "pos") {
      for (size_t i = 1; i < toks.size(); ++i) {
        if (toks[i] == "inf") {
          c.cells[cur].pos.push_back(IdealPoint::infinity());
        } else {
          size_t comma = toks[i].find(',');
          if (comma == std::string::npos) fail(ErrorKind::ParseError, "bad position token");
          c.cells[cur].pos.push_back(IdealPoint::at(
              Complex(std::stod(toks[i].substr(0, comma)), std::stod(toks[i].substr(comma + 1)))));
        }
      }
    } else if (toks[0] == "face") {
      std::vector<int> f;
      for (size_t i = 1; i < toks.size(); ++i) f.push_back(std::stoi(toks[i]));
      c.cells[cur].faces.push_back(std::move(f));
    } else if (toks[0] == "gluings") {
      size_t n = std::stoul(toks[1]);
      for (size_t g = 0; g < n; ++g) {
        if (!next_tokens(toks) || toks.size() < 6 || toks[0] != "glue" || toks[5] != ":")
          fail(ErrorKind::ParseError, "bad gluing line");
        FaceGluing fg;
        fg.cell_a = std::stoi(toks[1]);
        fg.face_a = std::stoi(toks[2]);
        fg.cell_b = std::stoi(toks[3]);
        fg.face_b = std::stoi(toks[4]);
        for (size_t i = 6; i < toks.size(); ++i) fg.vmap.push_back(std::stoi(toks[i]));
        c.gluings.push_back(std::move(fg));
      }
    } else {
      fail(ErrorKind::ParseError, "unexpected token '" + toks[0] + "'");
    }
  }
  c.validate();
  return c;
}

void write_order(const CuspOrder& o, std::ostream& out) {
  // emit the closure; re-reading reproduces the same relation
  for (const auto& [a, bs] : o.above)
    for (int b : bs) out << a << " < " << b << "\n";
}

CuspOrder read_order(std::istream& in) {
  std::vector<std::pair<int, int>> edges;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string a, rel, b;
    if (!(ls >> a)) continue;
    if (a[0] == '#') continue;
    if (!(ls >> rel >> b) || rel != "<") fail(ErrorKind::ParseError, "expected 'a < b'");
    edges.push_back({std::stoi(a), std::stoi(b)});
  }
  return CuspOrder::from_edges(edges);
}

}  // namespace coning
}  // namespace geotri
