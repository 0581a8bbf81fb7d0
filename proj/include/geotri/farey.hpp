#ifndef GEOTRI_FAREY_HPP
#define GEOTRI_FAREY_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace geotri {
namespace farey {

using Int = boost::multiprecision::cpp_int;

// A slope p/q in lowest terms; q > 0, or (p, q) = (1, 0) for infinity.
// Fibonacci-type growth along tree paths rules out fixed-width integers.
struct Slope {
  Int p, q;

  Slope() : p(0), q(1) {}
  Slope(Int pp, Int qq);

  bool is_infinity() const { return q == 0; }
  bool operator==(const Slope& o) const { return p == o.p && q == o.q; }
  bool operator!=(const Slope& o) const { return !(*this == o); }
  // order as elements of Q union {infinity}, with infinity largest
  bool operator<(const Slope& o) const;

  std::string str() const;
};

// |p1 q2 - p2 q1|; slopes are Farey-adjacent iff this is 1.
Int farey_det(const Slope& a, const Slope& b);

// A triangle of the Farey complex: three pairwise adjacent slopes.
struct FareyTriangle {
  std::array<Slope, 3> s;

  FareyTriangle() = default;
  FareyTriangle(Slope a, Slope b, Slope c);
  static FareyTriangle base() {
    return FareyTriangle(Slope(0, 1), Slope(1, 0), Slope(1, 1));
  }

  bool contains(const Slope& x) const;
  int index_of(const Slope& x) const;  // -1 if absent
  // equal as unordered triples
  bool same_triangle(const FareyTriangle& o) const;

  std::string str() const;
};

// The slope completing edge {a, b} to a triangle on the other side of c;
// c must be the third vertex of one of the two triangles on {a, b}.
Slope reflect(const Slope& a, const Slope& b, const Slope& c);

// The three triangles sharing an edge with t, indexed by the replaced vertex.
std::array<FareyTriangle, 3> neighbors(const FareyTriangle& t);

struct PathNode {
  FareyTriangle triangle;
  // the vertex the step introduced, and the edge it crossed (the two kept
  // vertices); meaningless on the start node
  Slope new_slope;
  std::array<Slope, 2> crossed_edge;
};

// Non-backtracking dual-tree walk.  At each triangle the edge just crossed
// is forbidden; of the two remaining edges, 'R' crosses the one introducing
// the larger new slope (as elements of Q union {infinity}) and 'L' the
// smaller.  On the start triangle the forbidden edge is {s[0], s[1]}.
std::vector<PathNode> path(const FareyTriangle& start, const std::string& turns);

// Convenience wrapper returning just the triangles (start included).
std::vector<FareyTriangle> path_to_slope_limit(const FareyTriangle& start,
                                               const std::string& turns);

// The lattice vector of slope p/q in Z + Z*omega: q + p*omega, so that
// 0/1 |-> 1 and 1/0 |-> omega.
std::complex<double> slope_vector(const Slope& s, std::complex<double> omega);

Slope parse_slope(const std::string& text);
FareyTriangle parse_triangle(const std::string& text);  // "p1/q1,p2/q2,p3/q3"

}  // namespace farey
}  // namespace geotri

#endif
