#include "geotri/hypgeom.hpp"

#include <algorithm>
#include <cmath>

#include "geotri/errors.hpp"

namespace geotri {
namespace hypgeom {

IdealPoint IdealPoint::projective(Complex num, Complex den) {
  IdealPoint p;
  double scale = std::max(std::abs(num), std::abs(den));
  if (scale == 0.0) fail(ErrorKind::DegenerateInput, "projective point (0:0)");
  p.num_ = num / scale;
  p.den_ = den / scale;
  if (std::abs(p.den_) < 1e-14 * std::abs(p.num_)) p.den_ = 0.0;
  return p;
}

Complex IdealPoint::value() const {
  if (is_infinity()) fail(ErrorKind::BadInput, "value() of the point at infinity");
  return num_ / den_;
}

Complex point_det(const IdealPoint& p, const IdealPoint& q) {
  return p.num() * q.den() - q.num() * p.den();
}

bool points_coincide(const IdealPoint& p, const IdealPoint& q, double tol) {
  double np = std::max(std::abs(p.num()), std::abs(p.den()));
  double nq = std::max(std::abs(q.num()), std::abs(q.den()));
  return std::abs(point_det(p, q)) <= tol * np * nq;
}

Horoball::Horoball(IdealPoint b, double s) : base(b), size(s) {
  if (!(s > 0.0)) fail(ErrorKind::BadInput, "horoball size must be positive");
}

ShapeParameter cross_ratio(const IdealPoint& v0, const IdealPoint& v1,
                           const IdealPoint& v2, const IdealPoint& v3) {
  const IdealPoint* v[4] = {&v0, &v1, &v2, &v3};
  for (int i = 0; i < 4; i++)
    for (int j = i + 1; j < 4; j++)
      if (points_coincide(*v[i], *v[j]))
        fail(ErrorKind::DegenerateInput, "coincident points in cross-ratio");
  Complex d20 = point_det(v2, v0), d31 = point_det(v3, v1);
  Complex d21 = point_det(v2, v1), d30 = point_det(v3, v0);
  return ShapeParameter((d20 * d31) / (d21 * d30));
}

IdealPoint solve_vertex(Complex z, const std::array<IdealPoint, 4>& pts, int missing) {
  const IdealPoint& p0 = pts[0];
  const IdealPoint& p1 = pts[1];
  const IdealPoint& p2 = pts[2];
  const IdealPoint& p3 = pts[3];
  // z * d21 * d30 = d20 * d31, linear in the missing projective pair.
  switch (missing) {
    case 3: {
      Complex d20 = point_det(p2, p0), d21 = point_det(p2, p1);
      return IdealPoint::projective(d20 * p1.num() - z * d21 * p0.num(),
                                    d20 * p1.den() - z * d21 * p0.den());
    }
    case 2: {
      Complex d31 = point_det(p3, p1), d30 = point_det(p3, p0);
      return IdealPoint::projective(d31 * p0.num() - z * d30 * p1.num(),
                                    d31 * p0.den() - z * d30 * p1.den());
    }
    case 1: {
      Complex d20 = point_det(p2, p0), d30 = point_det(p3, p0);
      return IdealPoint::projective(d20 * p3.num() - z * d30 * p2.num(),
                                    d20 * p3.den() - z * d30 * p2.den());
    }
    case 0: {
      Complex d31 = point_det(p3, p1), d21 = point_det(p2, p1);
      return IdealPoint::projective(d31 * p2.num() - z * d21 * p3.num(),
                                    d31 * p2.den() - z * d21 * p3.den());
    }
    default:
      fail(ErrorKind::BadInput, "missing slot out of range");
  }
}

DihedralAngleTriple dihedral_angles(const ShapeParameter& s) {
  if (!s.geometric())
    fail(ErrorKind::NonGeometric, "dihedral angles need Im z > 0");
  Complex z = s.z;
  DihedralAngleTriple t;
  t.theta[0] = std::arg(z);
  t.theta[1] = std::arg(1.0 / (1.0 - z));
  t.theta[2] = std::arg((z - 1.0) / z);
  return t;
}

namespace {

// smooth part of the integrand: -log(sin t / t), removable zero at t = 0
double smooth_part(double t) {
  if (std::abs(t) < 1e-8) return t * t / 6.0;
  return -std::log(std::sin(t) / t);
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(double a, double b, double fa, double fm, double fb, double whole,
                double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = smooth_part(lm), frm = smooth_part(rm);
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
         adaptive(m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

}  // namespace

double lobachevsky(double theta) {
  // odd, pi-periodic; reduce to [-pi/2, pi/2]
  double t = std::remainder(theta, kPi);
  if (t == 0.0 || std::abs(std::abs(t) - kPi / 2.0) < 1e-300) {
    if (t == 0.0) return 0.0;
  }
  double sign = t < 0.0 ? -1.0 : 1.0;
  t = std::abs(t);
  if (t < 1e-300) return 0.0;
  // L(t) = t - t log(2t) + int_0^t -log(sin u / u) du
  double fa = smooth_part(0.0), fb = smooth_part(t), fm = smooth_part(0.5 * t);
  double whole = simpson(0.0, t, fa, fm, fb);
  double integral = adaptive(0.0, t, fa, fm, fb, whole, 1e-14, 40);
  return sign * (t - t * std::log(2.0 * t) + integral);
}

double lobachevsky_series(double theta, int terms) {
  double acc = 0.0;
  for (int n = terms; n >= 1; n--) acc += std::sin(2.0 * n * theta) / (double(n) * n);
  return 0.5 * acc;
}

double tet_volume(const ShapeParameter& s) {
  if (!s.geometric())
    fail(ErrorKind::NonGeometric, "volume needs Im z > 0");
  DihedralAngleTriple t = dihedral_angles(s);
  return lobachevsky(t.theta[0]) + lobachevsky(t.theta[1]) + lobachevsky(t.theta[2]);
}

double orthogeodesic_length(const Horoball& b1, const Horoball& b2) {
  bool i1 = b1.base.is_infinity(), i2 = b2.base.is_infinity();
  if (i1 && i2)
    fail(ErrorKind::OverlappingHoroballs, "two horoballs based at infinity are nested");
  if (i1 || i2) {
    const Horoball& top = i1 ? b1 : b2;
    const Horoball& bot = i1 ? b2 : b1;
    double ratio = top.size / bot.size;
    if (ratio < 1.0)
      fail(ErrorKind::OverlappingHoroballs, "horoball pokes through the plane at infinity");
    return std::log(ratio);
  }
  double d = std::abs(b1.base.value() - b2.base.value());
  double prod = b1.size * b2.size;
  if (d * d < prod)
    fail(ErrorKind::OverlappingHoroballs, "horoball interiors intersect");
  return std::log(d * d / prod);
}

IdealPoint apply_mobius(const Mobius& m, const IdealPoint& p, double det_tol) {
  if (std::abs(m.det() - Complex(1.0)) > det_tol)
    fail(ErrorKind::NonUnimodular, "matrix determinant is not 1");
  return IdealPoint::projective(m.a * p.num() + m.b * p.den(),
                                m.c * p.num() + m.d * p.den());
}

Horoball apply_mobius(const Mobius& m, const Horoball& b, double det_tol) {
  IdealPoint image = apply_mobius(m, b.base, det_tol);
  if (b.base.is_infinity()) {
    if (std::abs(m.c) == 0.0) {
      // z -> (a/d) z + b/d scales heights by |a/d| = |a|^2
      return Horoball(image, b.size * std::norm(m.a / m.d));
    }
    return Horoball(image, 1.0 / (std::norm(m.c) * b.size));
  }
  Complex p = b.base.value();
  Complex cp_d = m.c * p + m.d;
  if (image.is_infinity()) return Horoball::at_infinity(1.0 / (std::norm(m.c) * b.size));
  return Horoball(image, b.size / std::norm(cp_d));
}

}  // namespace hypgeom
}  // namespace geotri
