#include "geotri/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geotri/errors.hpp"

namespace geotri {
namespace canonical {

namespace {

Complex pos(const LatticeVec& v, const CuspLattice& lat) {
  return ananas::lattice_position(v, lat);
}

// circumcenter of three points in the plane
Complex circumcenter3(Complex a, Complex b, Complex c) {
  Complex u = b - a, v = c - a;
  double d = 2.0 * (u.real() * v.imag() - u.imag() * v.real());
  if (std::abs(d) < 1e-300) fail(ErrorKind::DegenerateInput, "collinear circumcircle");
  double u2 = std::norm(u), v2 = std::norm(v);
  double x = (v.imag() * u2 - u.imag() * v2) / d;
  double y = (u.real() * v2 - v.real() * u2) / d;
  return a + Complex(x, y);
}

// lattice points within euclidean radius r of the origin region
std::vector<LatticeVec> lattice_window(const CuspLattice& lat, double r) {
  double im = std::abs(pos(LatticeVec(0, 1), lat).imag());
  long n = static_cast<long>(std::ceil(r / im)) + 2;
  long m = static_cast<long>(std::ceil(r + n * std::abs(pos(LatticeVec(0, 1), lat).real()))) + 2;
  std::vector<LatticeVec> out;
  for (long i = -m; i <= m; ++i)
    for (long j = -n; j <= n; ++j) out.push_back(LatticeVec(i, j));
  return out;
}

double dist3(Complex a, double ha, Complex b, double hb) {
  double dz = ha - hb;
  return std::sqrt(std::norm(a - b) + dz * dz);
}

}  // namespace

double PackingScene::w() const {
  double best = 1e300;
  for (const LatticeVec& v : lattice_window(lattice, 3.0))
    if (!(v.m == 0 && v.n == 0)) best = std::min(best, std::abs(pos(v, lattice)));
  return best;
}

CuspCellulation cusp_cellulation(const CuspLattice& lattice, double tol) {
  CuspCellulation out;
  out.rectangular = lattice.rectangular(tol);
  auto cell_of = [&](std::vector<LatticeVec> corners) {
    CuspCell c;
    c.corners = std::move(corners);
    for (const LatticeVec& v : c.corners) c.vertices.push_back(pos(v, lattice));
    if (c.vertices.size() == 4)
      c.circumcenter = 0.5 * (c.vertices[0] + c.vertices[2]);
    else
      c.circumcenter = circumcenter3(c.vertices[0], c.vertices[1], c.vertices[2]);
    c.circumradius = std::abs(c.vertices[0] - c.circumcenter);
    return c;
  };
  if (out.rectangular) {
    out.cells.push_back(cell_of({LatticeVec(0, 0), LatticeVec(1, 0), LatticeVec(1, 1),
                                 LatticeVec(0, 1)}));
  } else {
    out.cells.push_back(cell_of({LatticeVec(0, 0), LatticeVec(1, 0), LatticeVec(1, 1)}));
    out.cells.push_back(cell_of({LatticeVec(0, 0), LatticeVec(1, 1), LatticeVec(0, 1)}));
  }
  return out;
}

double covering_radius(const CuspLattice& lattice) {
  double best = 0.0;
  for (const CuspCell& c : cusp_cellulation(lattice).cells)
    best = std::max(best, c.circumradius);
  return best;
}

RestingBall resting_ball(const PackingScene& s, double tol) {
  double H = s.full_height, b = s.ball_diameter;
  if (!(H > b))
    fail(ErrorKind::HeightTooSmall, "horoball at infinity meets the lattice horoballs");

  // start from the triangle circumdisk; tangency at p means
  // rho^2 + (z0 - b/2)^2 = (R + b/2)^2 with z0 = H - R, giving
  // R = (rho^2 + H^2 - bH) / (2H), independent of which tangency is used
  CuspCell tri = cusp_cellulation(s.lattice, -1.0).cells[0];  // always the triangle
  RestingBall rb;
  rb.center = tri.circumcenter;
  double rho = tri.circumradius;
  rb.radius = (rho * rho + H * H - b * H) / (2.0 * H);
  rb.height = H - rb.radius;
  if (!(rb.height - rb.radius > tol) || !(rb.height > b / 2.0))
    fail(ErrorKind::HeightTooSmall, "maximal ball is not disjoint from the plane");

  rb.tangencies = tri.corners;
  // the fourth parallelogram vertex is tangent too iff the lattice is
  // rectangular; classify by residual, not by the modulus
  LatticeVec fourth(0, 1);
  double clear4 = dist3(pos(fourth, s.lattice), b / 2.0, rb.center, rb.height) -
                  (rb.radius + b / 2.0);
  if (std::abs(clear4) < tol) {
    // re-centre on the rectangle so all four residuals vanish
    rb.center = 0.5 * (pos(LatticeVec(0, 0), s.lattice) + pos(LatticeVec(1, 1), s.lattice));
    rho = std::abs(pos(LatticeVec(0, 0), s.lattice) - rb.center);
    rb.radius = (rho * rho + H * H - b * H) / (2.0 * H);
    rb.height = H - rb.radius;
    rb.tangencies = {LatticeVec(0, 0), LatticeVec(1, 0), LatticeVec(1, 1), fourth};
  }
  for (const LatticeVec& p : rb.tangencies)
    rb.residuals.push_back(std::abs(
        dist3(pos(p, s.lattice), b / 2.0, rb.center, rb.height) - (rb.radius + b / 2.0)));

  // nearest non-tangent horoball over a generous window
  double window = 3.0 * std::max(1.0, std::abs(s.lattice.omega));
  double best = 1e300;
  for (const LatticeVec& q : lattice_window(s.lattice, window + 2.0)) {
    if (std::find(rb.tangencies.begin(), rb.tangencies.end(), q) != rb.tangencies.end())
      continue;
    best = std::min(best, dist3(pos(q, s.lattice), b / 2.0, rb.center, rb.height) -
                              (rb.radius + b / 2.0));
  }
  rb.fourth_residual = best;
  return rb;
}

bool resting_regime_reached(const PackingScene& s, double tol) {
  try {
    resting_ball(s, tol);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::HeightTooSmall) return false;
    throw;
  }
}

double critical_diameter(double w, double mu) {
  if (!(w > 0) || !(mu > 0)) fail(ErrorKind::BadInput, "w and mu must be positive");
  // a resting ball tangent to two diameter-h horoballs >= w apart needs
  // radius >= w^2/(8h); a deep hole admits radius at most mu^2/2
  auto admissible = [&](double h) { return w * w / (8.0 * h) <= mu * mu / 2.0; };
  double hi = 1.0;
  while (!admissible(hi)) hi *= 2.0;
  double lo = hi * 1e-18;
  while (admissible(lo)) lo *= 0.5;
  while ((hi - lo) / hi > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (admissible(mid) ? hi : lo) = mid;
  }
  return hi;
}

double problematic_bound(double ell, const CuspLattice& lattice) {
  PackingScene s;
  s.lattice = lattice;
  return ell - std::log(critical_diameter(s.w(), covering_radius(lattice)));
}

ExtractedAnanas extract_ananas(const PackingScene& s, double tol) {
  RestingBall rb = resting_ball(s, tol);
  ExtractedAnanas out;
  out.free_diagonal = rb.tangencies.size() == 4;
  // base Farey triangle from the edge vectors of the dual cell's base;
  // in the rectangular case the +1/1 diagonal is recorded as a convention
  LatticeVec e1 = rb.tangencies[1] - rb.tangencies[0];
  LatticeVec e2 = rb.tangencies[2] - rb.tangencies[0];
  farey::FareyTriangle tr(ananas::slope_of(e1), ananas::slope_of(e2 - e1),
                          ananas::slope_of(e2));
  out.state = ananas::build(s.lattice, tr);
  return out;
}

std::string horoball_svg(const PackingScene& s) {
  RestingBall rb = resting_ball(s);
  double H = s.full_height, b = s.ball_diameter;
  double rho = std::abs(pos(rb.tangencies[0], s.lattice) - rb.center);
  double w = s.w();
  double xmax = std::max(3.0 * w, rho + rb.radius) + 1.0;
  double scale = 600.0 / (2.0 * xmax);
  auto X = [&](double x) { return (x + xmax) * scale; };
  auto Y = [&](double z) { return (H + 0.5 - z) * scale; };
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='600' height='"
      << (H + 1.0) * scale << "'>\n";
  svg << "<line x1='0' y1='" << Y(0) << "' x2='600' y2='" << Y(0)
      << "' stroke='black'/>\n";
  svg << "<line x1='0' y1='" << Y(H) << "' x2='600' y2='" << Y(H)
      << "' stroke='green' stroke-width='3'/>\n";
  // section through the ball centre: tangent horoballs at distance rho, and
  // a row of lattice horoballs at spacing w
  for (double x : {-rho, rho})
    svg << "<circle cx='" << X(x) << "' cy='" << Y(b / 2.0) << "' r='"
        << (b / 2.0) * scale << "' fill='none' stroke='blue'/>\n";
  for (int k = -3; k <= 3; ++k)
    svg << "<circle cx='" << X(k * w) << "' cy='" << Y(b / 2.0) << "' r='"
        << (b / 2.0) * scale << "' fill='none' stroke='blue' stroke-dasharray='3 3'/>\n";
  svg << "<circle cx='" << X(0) << "' cy='" << Y(rb.height) << "' r='"
      << rb.radius * scale << "' fill='none' stroke='red' stroke-width='2'/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace canonical
}  // namespace geotri
