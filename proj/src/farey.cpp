#include "geotri/farey.hpp"

#include <sstream>

#include "geotri/errors.hpp"

namespace geotri {
namespace farey {

Slope::Slope(Int pp, Int qq) : p(std::move(pp)), q(std::move(qq)) {
  if (p == 0 && q == 0) fail(ErrorKind::BadInput, "slope 0/0");
  Int g = gcd(p, q);
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
}

bool Slope::operator<(const Slope& o) const {
  if (is_infinity()) return false;
  if (o.is_infinity()) return true;
  return p * o.q < o.p * q;
}

std::string Slope::str() const {
  return p.str() + "/" + q.str();
}

Int farey_det(const Slope& a, const Slope& b) {
  return abs(a.p * b.q - b.p * a.q);
}

FareyTriangle::FareyTriangle(Slope a, Slope b, Slope c) : s{a, b, c} {
  for (int i = 0; i < 3; i++)
    if (farey_det(s[i], s[(i + 1) % 3]) != 1)
      fail(ErrorKind::BadInput,
           "slopes " + s[i].str() + ", " + s[(i + 1) % 3].str() + " are not Farey-adjacent");
}

bool FareyTriangle::contains(const Slope& x) const { return index_of(x) >= 0; }

int FareyTriangle::index_of(const Slope& x) const {
  for (int i = 0; i < 3; i++)
    if (s[i] == x) return i;
  return -1;
}

bool FareyTriangle::same_triangle(const FareyTriangle& o) const {
  return o.contains(s[0]) && o.contains(s[1]) && o.contains(s[2]);
}

std::string FareyTriangle::str() const {
  return s[0].str() + "," + s[1].str() + "," + s[2].str();
}

Slope reflect(const Slope& a, const Slope& b, const Slope& c) {
  // the two triangles on edge {a, b} have third vertices a+b and a-b
  // (as vectors, up to sign)
  Slope sum(a.p + b.p, a.q + b.q);
  Slope diff(a.p - b.p, a.q - b.q);
  if (sum == c) return diff;
  if (diff == c) return sum;
  fail(ErrorKind::BadInput,
       c.str() + " is not a vertex of either triangle on edge {" + a.str() + "," + b.str() + "}");
}

std::array<FareyTriangle, 3> neighbors(const FareyTriangle& t) {
  std::array<FareyTriangle, 3> out;
  for (int k = 0; k < 3; k++) {
    const Slope& a = t.s[(k + 1) % 3];
    const Slope& b = t.s[(k + 2) % 3];
    FareyTriangle n = t;
    n.s[k] = reflect(a, b, t.s[k]);
    out[k] = n;
  }
  return out;
}

std::vector<PathNode> path(const FareyTriangle& start, const std::string& turns) {
  std::vector<PathNode> out;
  PathNode cur;
  cur.triangle = start;
  cur.crossed_edge = {start.s[0], start.s[1]};  // forbidden on the start node
  out.push_back(cur);
  for (char c : turns) {
    if (c != 'L' && c != 'R')
      fail(ErrorKind::ParseError, std::string("turn character '") + c + "' (want L or R)");
    const FareyTriangle& t = out.back().triangle;
    const auto& forb = out.back().crossed_edge;
    // the two crossable edges are those containing the vertex off the
    // forbidden edge; crossing edge {a,b} replaces the third vertex
    struct Cand {
      Slope new_slope;
      int replaced;
    };
    std::vector<Cand> cands;
    for (int k = 0; k < 3; k++) {
      const Slope& a = t.s[(k + 1) % 3];
      const Slope& b = t.s[(k + 2) % 3];
      bool is_forbidden = (a == forb[0] && b == forb[1]) || (a == forb[1] && b == forb[0]);
      if (is_forbidden) continue;
      cands.push_back({reflect(a, b, t.s[k]), k});
    }
    if (cands.size() != 2) fail(ErrorKind::BadInput, "forbidden edge not an edge of the triangle");
    int pick;
    if (cands[0].new_slope < cands[1].new_slope)
      pick = (c == 'R') ? 1 : 0;
    else
      pick = (c == 'R') ? 0 : 1;
    PathNode next;
    next.triangle = out.back().triangle;
    next.triangle.s[cands[pick].replaced] = cands[pick].new_slope;
    next.new_slope = cands[pick].new_slope;
    int k = cands[pick].replaced;
    next.crossed_edge = {out.back().triangle.s[(k + 1) % 3], out.back().triangle.s[(k + 2) % 3]};
    out.push_back(next);
  }
  return out;
}

std::vector<FareyTriangle> path_to_slope_limit(const FareyTriangle& start,
                                               const std::string& turns) {
  std::vector<FareyTriangle> out;
  for (const auto& node : path(start, turns)) out.push_back(node.triangle);
  return out;
}

std::complex<double> slope_vector(const Slope& s, std::complex<double> omega) {
  if (omega.imag() == 0.0) fail(ErrorKind::RealModulus, "lattice modulus must be non-real");
  // slope 0/1 is the curve of the basis vector 1, slope 1/0 that of omega
  return double(s.q) + double(s.p) * omega;
}

Slope parse_slope(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Slope(Int(text), 1);
    return Slope(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::ParseError, "bad slope '" + text + "'");
  }
}

FareyTriangle parse_triangle(const std::string& text) {
  std::array<Slope, 3> s;
  std::stringstream ss(text);
  std::string part;
  for (int i = 0; i < 3; i++) {
    if (!std::getline(ss, part, ','))
      fail(ErrorKind::ParseError, "triangle needs three comma-separated slopes");
    s[i] = parse_slope(part);
  }
  if (std::getline(ss, part, ','))
    fail(ErrorKind::ParseError, "triangle needs exactly three slopes");
  return FareyTriangle(s[0], s[1], s[2]);
}

}  // namespace farey
}  // namespace geotri
