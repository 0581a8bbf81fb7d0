#ifndef GEOTRI_HYPGEOM_HPP
#define GEOTRI_HYPGEOM_HPP

#include <array>
#include <complex>

namespace geotri {
namespace hypgeom {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Point of the sphere at infinity of H^3, stored as a projective pair
// num/den so that infinity (den = 0) needs no special casing in
// cross-ratios and Mobius maps.
class IdealPoint {
public:
  IdealPoint() : num_(0.0, 0.0), den_(1.0, 0.0) {}
  IdealPoint(Complex z) : num_(z), den_(1.0, 0.0) {}
  IdealPoint(double x, double y) : num_(x, y), den_(1.0, 0.0) {}

  static IdealPoint infinity() { return projective(Complex(1.0), Complex(0.0)); }
  static IdealPoint projective(Complex num, Complex den);

  bool is_infinity() const { return den_ == Complex(0.0); }
  // Finite value; fails on infinity.
  Complex value() const;

  Complex num() const { return num_; }
  Complex den() const { return den_; }

private:
  Complex num_, den_;
};

// det(p, q) = p.num * q.den - q.num * p.den; zero iff p == q projectively.
Complex point_det(const IdealPoint& p, const IdealPoint& q);
bool points_coincide(const IdealPoint& p, const IdealPoint& q, double tol = 1e-12);

struct Horoball {
  IdealPoint base;
  // Euclidean diameter for a finite base; Euclidean height of the
  // bounding plane for base = infinity.
  double size = 1.0;

  Horoball() = default;
  Horoball(IdealPoint b, double s);
  static Horoball at_infinity(double height) { return Horoball(IdealPoint::infinity(), height); }
};

struct ShapeParameter {
  Complex z;

  ShapeParameter() : z(0.0) {}
  explicit ShapeParameter(Complex w) : z(w) {}
  bool geometric(double tol = 0.0) const { return z.imag() > tol; }
};

struct DihedralAngleTriple {
  std::array<double, 3> theta;
  double sum() const { return theta[0] + theta[1] + theta[2]; }
};

struct Mobius {
  Complex a, b, c, d;

  Complex det() const { return a * d - b * c; }
  static Mobius identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mobius translation(Complex t) { return {1.0, t, 0.0, 1.0}; }
  Mobius operator*(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

// z = ((v2-v0)(v3-v1)) / ((v2-v1)(v3-v0)); sends (inf, 0, 1, z) -> z.
ShapeParameter cross_ratio(const IdealPoint& v0, const IdealPoint& v1,
                           const IdealPoint& v2, const IdealPoint& v3);

// Given the cross-ratio z of (v0,v1,v2,v3) and three of the points,
// recovers the remaining one (slot `missing` in 0..3).
IdealPoint solve_vertex(Complex z, const std::array<IdealPoint, 4>& pts, int missing);

// (arg z, arg 1/(1-z), arg (z-1)/z); requires Im z > 0.
DihedralAngleTriple dihedral_angles(const ShapeParameter& s);

// Lobachevsky function L(t) = -int_0^t log|2 sin u| du, by adaptive
// quadrature after splitting off the log singularity; abs error <= 1e-12.
double lobachevsky(double theta);
// Partial sum of (1/2) sum sin(2n t)/n^2, for cross-checking.
double lobachevsky_series(double theta, int terms);

// L(t1)+L(t2)+L(t3) for the three dihedral angles of shape z.
double tet_volume(const ShapeParameter& s);

// log of the exponential distance between disjoint horoball boundaries;
// 0 at tangency, error if interiors overlap.
double orthogeodesic_length(const Horoball& b1, const Horoball& b2);

IdealPoint apply_mobius(const Mobius& m, const IdealPoint& p, double det_tol = 1e-9);
Horoball apply_mobius(const Mobius& m, const Horoball& b, double det_tol = 1e-9);

}  // namespace hypgeom
}  // namespace geotri

#endif
