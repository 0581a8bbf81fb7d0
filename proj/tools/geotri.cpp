#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geotri/ananas.hpp"
#include "geotri/canonical.hpp"
#include "geotri/config.hpp"
#include "geotri/congruence.hpp"
#include "geotri/coning.hpp"
#include "geotri/errors.hpp"
#include "geotri/farey.hpp"
#include "geotri/triangulation.hpp"

namespace {

using geotri::Config;
using geotri::ErrorKind;
using geotri::fail;
using geotri::hypgeom::Complex;
namespace ananas = geotri::ananas;
namespace canonical = geotri::canonical;
namespace congruence = geotri::congruence;
namespace coning = geotri::coning;
namespace farey = geotri::farey;
namespace tri = geotri::tri;

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail(ErrorKind::ParseError, "bad number '" + s + "'");
  }
  if (pos != s.size()) fail(ErrorKind::ParseError, "bad number '" + s + "'");
  return v;
}

// a+bi decimals: "0.5+0.866i", "1.0i", "-2", "i"
Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) fail(ErrorKind::ParseError, "empty complex number");
  if (s.back() != 'i') return Complex(to_double(s), 0.0);
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t j = s.size(); j-- > 1;)
    if ((s[j] == '+' || s[j] == '-') && s[j - 1] != 'e' && s[j - 1] != 'E') {
      split = j;
      break;
    }
  std::string re = "0", im = s;
  if (split != std::string::npos) {
    re = s.substr(0, split);
    im = s.substr(split);
  }
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return Complex(to_double(re), to_double(im));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

congruence::Rat parse_rat(const std::string& s) {
  try {
    return congruence::Rat(s);
  } catch (const std::exception&) {
    fail(ErrorKind::ParseError, "bad rational '" + s + "'");
  }
}

// comma-separated rationals, ascending powers
std::vector<congruence::Rat> parse_coords(const std::string& s) {
  std::vector<congruence::Rat> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_rat(part));
  return out;
}

std::string fmt_c(Complex z) {
  std::ostringstream os;
  os << std::setprecision(15) << z.real() << (z.imag() < 0 ? "-" : "+")
     << std::abs(z.imag()) << "i";
  return os.str();
}

// ------------------------------------------------------------------- plumbing

struct Ctx {
  std::string config_file;
  Config cfg;
  int rc = 0;

  void finalize() {
    if (!config_file.empty()) cfg = geotri::load_config_file(config_file, cfg);
    if (const char* d = std::getenv("GEOTRI_OUTPUT_DIR"))
      if (*d) cfg.output_dir = d;
    cfg.validate();
    std::filesystem::create_directories(cfg.output_dir);
  }

  std::string out(const std::string& name) const {
    return (std::filesystem::path(cfg.output_dir) / name).string();
  }

  void write_report(const std::string& name, const std::string& body) const {
    std::ofstream f(out(name));
    if (!f) fail(ErrorKind::BadInput, "cannot write " + out(name));
    f << body;
  }
};

ananas::DrilledAnanasState make_ananas(const Ctx& ctx, const std::string& omega,
                                       const std::string& triangle,
                                       const std::string& diagonal) {
  auto lat = ananas::CuspLattice::reduce(parse_complex(omega), ctx.cfg.geom_tol);
  farey::FareyTriangle t = farey::FareyTriangle::base();
  if (!triangle.empty()) t = farey::parse_triangle(triangle);
  if (!diagonal.empty())
    t = farey::FareyTriangle(farey::Slope(0, 1), farey::Slope(1, 0),
                             farey::parse_slope(diagonal));
  return ananas::build(lat, t);
}

int verify_and_print(const tri::IdealTriangulation& t, double tol, std::ostream& os) {
  t.validate();
  if (!t.has_shapes()) {
    os << "cells " << t.size() << "\nstructure ok (no shapes)\n";
    return 0;
  }
  auto rep = tri::verify_geometric(t, tol);
  os << rep.summary();
  return rep.pass ? 0 : 1;
}

// ------------------------------------------------------------------- commands

void cmd_ananas_build(Ctx& ctx, const std::string& omega, const std::string& triangle,
                      const std::string& diagonal) {
  ctx.finalize();
  auto a = make_ananas(ctx, omega, triangle, diagonal);
  auto t = ananas::to_triangulation(a);
  tri::write_triangulation(t, ctx.out("ananas.tri"));
  std::ostringstream os;
  os << "omega " << fmt_c(a.lattice.omega) << "\n";
  os << "triangle " << a.triangle().str() << "\n";
  os << "core-shapes " << fmt_c(a.core_shape_1().z) << " " << fmt_c(a.core_shape_2().z)
     << "\n";
  auto ang = ananas::boundary_angles(a);
  os << "boundary-angles " << std::setprecision(15) << ang[0] << " " << ang[1] << " "
     << ang[2] << "\n";
  os << "volume " << std::setprecision(15) << t.volume() << "\n";
  ctx.rc = verify_and_print(t, ctx.cfg.geom_tol, os);
  ctx.write_report("ananas_build.txt", os.str());
  std::cout << os.str();
}

void cmd_ananas_walk(Ctx& ctx, const std::string& omega, const std::string& turns,
                     const std::string& emit, const std::string& triangle,
                     const std::string& diagonal) {
  ctx.finalize();
  if (emit != "tri" && emit != "svg" && emit != "both")
    fail(ErrorKind::BadInput, "--emit must be tri, svg or both");
  if (int(turns.size()) > ctx.cfg.tree_depth_limit)
    fail(ErrorKind::BadInput, "path longer than tree_depth_limit");
  auto a0 = make_ananas(ctx, omega, triangle, diagonal);
  auto states = ananas::tree_walk(a0, turns, ctx.cfg.geom_tol);
  std::ostringstream os;
  os << "omega " << fmt_c(a0.lattice.omega) << "\n";
  os << "turns " << turns << "\n";
  for (std::size_t i = 1; i < states.size(); ++i) {
    std::ostringstream name;
    name << "walk_" << std::setw(2) << std::setfill('0') << i;
    auto t = ananas::to_triangulation(states[i]);
    auto rep = tri::verify_geometric(t, ctx.cfg.geom_tol);
    if (!rep.pass) ctx.rc = 1;
    if (emit == "tri" || emit == "both")
      tri::write_triangulation(t, ctx.out(name.str() + ".tri"));
    if (emit == "svg" || emit == "both") {
      std::ofstream f(ctx.out(name.str() + ".svg"));
      f << ananas::cellulation_svg(states[i]);
    }
    os << name.str() << " triangle " << states[i].triangle().str() << " cells "
       << t.size() << " volume " << std::setprecision(15) << t.volume() << " "
       << (rep.pass ? "geometric" : "NON-GEOMETRIC") << "\n";
  }
  os << (ctx.rc == 0 ? "all nodes geometric\n" : "verification failed\n");
  ctx.write_report("walk.txt", os.str());
  std::cout << os.str();
}

void cmd_canonical_rest(Ctx& ctx, const std::string& omega, double height) {
  ctx.finalize();
  canonical::PackingScene s;
  s.lattice = ananas::CuspLattice::reduce(parse_complex(omega), ctx.cfg.geom_tol);
  s.full_height = height;
  auto ball = canonical::resting_ball(s, ctx.cfg.tangency_tol);
  std::ostringstream os;
  os << "omega " << fmt_c(s.lattice.omega) << "\n";
  os << "center " << fmt_c(ball.center) << "\n";
  os << std::setprecision(15) << "height " << ball.height << "\n";
  os << "radius " << ball.radius << "\n";
  os << "tangencies: " << ball.tangencies.size()
     << (ball.tangencies.size() == 4 ? " (rectangular)" : "") << "\n";
  for (std::size_t i = 0; i < ball.tangencies.size(); ++i)
    os << "tangency " << ball.tangencies[i].m << " " << ball.tangencies[i].n
       << " residual " << ball.residuals[i] << "\n";
  os << "fourth-residual " << ball.fourth_residual << "\n";
  ctx.write_report("rest.txt", os.str());
  std::ofstream svg(ctx.out("rest.svg"));
  svg << canonical::horoball_svg(s);
  std::cout << os.str();
}

void cmd_canonical_cellulation(Ctx& ctx, const std::string& omega) {
  ctx.finalize();
  auto lat = ananas::CuspLattice::reduce(parse_complex(omega), ctx.cfg.geom_tol);
  auto cc = canonical::cusp_cellulation(lat, ctx.cfg.tangency_tol);
  std::ostringstream os;
  os << "omega " << fmt_c(lat.omega) << "\n";
  os << (cc.rectangular ? "rectangular: one rectangle\n"
                        : "non-rectangular: two isometric acute triangles\n");
  for (const auto& cell : cc.cells) {
    os << "cell";
    for (const auto& v : cell.corners) os << " " << v.m << "," << v.n;
    os << " circumcenter " << fmt_c(cell.circumcenter) << " circumradius "
       << std::setprecision(15) << cell.circumradius << "\n";
  }
  os << "covering-radius " << std::setprecision(15) << canonical::covering_radius(lat)
     << "\n";
  ctx.write_report("cellulation.txt", os.str());
  std::cout << os.str();
}

void cmd_canonical_bound(Ctx& ctx, double ell, const std::string& omega) {
  ctx.finalize();
  auto lat = ananas::CuspLattice::reduce(parse_complex(omega), ctx.cfg.geom_tol);
  double L = canonical::problematic_bound(ell, lat);
  std::ostringstream os;
  os << "omega " << fmt_c(lat.omega) << "\n";
  os << std::setprecision(15) << "ell " << ell << "\n";
  os << "bound " << L << "\n";
  ctx.write_report("bound.txt", os.str());
  std::cout << os.str();
}

std::map<std::pair<int, int>, int> read_diagonals(const std::string& path) {
  std::map<std::pair<int, int>, int> choice;
  std::ifstream f(path);
  if (!f) fail(ErrorKind::BadInput, "cannot read " + path);
  std::string line;
  while (std::getline(f, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream is(line);
    int cell, face, corner;
    if (is >> cell >> face >> corner) choice[{cell, face}] = corner;
  }
  return choice;
}

void cmd_cone_run(Ctx& ctx, const std::string& complex_file,
                  const std::string& order_file, const std::string& diagonals_file) {
  ctx.finalize();
  std::ifstream cf(complex_file);
  if (!cf) fail(ErrorKind::BadInput, "cannot read " + complex_file);
  auto c = coning::read_complex(cf);
  std::ifstream of(order_file);
  if (!of) fail(ErrorKind::BadInput, "cannot read " + order_file);
  auto o = coning::read_order(of);
  auto pd = coning::iterated_cone(c, o);
  std::map<std::pair<int, int>, int> choice;
  if (!diagonals_file.empty()) choice = read_diagonals(diagonals_file);
  auto t = coning::choose_diagonals(pd, choice);
  tri::write_triangulation(t, ctx.out("cone.tri"));
  std::ostringstream os;
  os << "cells " << c.cells.size() << " gluings " << c.gluings.size() << "\n";
  os << "pyramids " << pd.pyramids.size() << "\n";
  for (const auto& fc : pd.face_cases)
    os << "gluing " << fc.gluing << " case " << fc.kase << "\n";
  os << "tetrahedra " << t.size() << "\n";
  ctx.rc = verify_and_print(t, ctx.cfg.geom_tol, os);
  ctx.write_report("cone.txt", os.str());
  std::cout << os.str();
}

void cmd_tri_verify(Ctx& ctx, const std::string& file) {
  ctx.finalize();
  auto t = tri::read_triangulation_file(file);
  std::ostringstream os;
  ctx.rc = verify_and_print(t, ctx.cfg.geom_tol, os);
  ctx.write_report("verify.txt", os.str());
  std::cout << os.str();
}

void cmd_tri_move(Ctx& ctx, const std::string& file, const std::string& site,
                  const std::string& kind, int diagonal, bool force,
                  std::string out_file) {
  ctx.finalize();
  auto t = tri::read_triangulation_file(file);
  auto parts = split(site, ',');
  tri::PachnerSite s;
  if (kind == "23") {
    if (parts.size() != 2) fail(ErrorKind::BadInput, "--site cell,face for a 2-3 move");
    s = tri::PachnerSite::at_face(std::stoi(parts[0]), std::stoi(parts[1]));
  } else if (kind == "32" || kind == "44") {
    if (parts.size() != 3) fail(ErrorKind::BadInput, "--site cell,a,b for this move");
    s = tri::PachnerSite::at_edge(std::stoi(parts[0]), std::stoi(parts[1]),
                                  std::stoi(parts[2]));
  } else {
    fail(ErrorKind::BadInput, "--kind must be 23, 32 or 44");
  }
  tri::IdealTriangulation r;
  if (kind == "23")
    r = tri::pachner_23(t, s, force, ctx.cfg.geom_tol);
  else if (kind == "32")
    r = tri::pachner_32(t, s, force, ctx.cfg.geom_tol);
  else
    r = tri::pachner_44(t, s, diagonal, force, ctx.cfg.geom_tol);
  if (out_file.empty()) out_file = ctx.out("move.tri");
  tri::write_triangulation(r, out_file);
  std::ostringstream os;
  os << "kind " << kind << " cells " << t.size() << " -> " << r.size() << "\n";
  ctx.rc = verify_and_print(r, ctx.cfg.geom_tol, os);
  ctx.write_report("move.txt", os.str());
  std::cout << os.str();
}

void cmd_farey_path(Ctx& ctx, const std::string& start, const std::string& turns) {
  ctx.finalize();
  auto t0 = farey::parse_triangle(start);
  auto nodes = farey::path(t0, turns);
  std::ostringstream os;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    os << nodes[i].triangle.str();
    if (i > 0) os << " new " << nodes[i].new_slope.str();
    os << "\n";
  }
  ctx.write_report("farey_path.txt", os.str());
  std::cout << os.str();
}

void cmd_congr_order(Ctx& ctx, const std::string& minpoly, const std::string& lambda,
                     long long q, const std::string& nonzero) {
  ctx.finalize();
  auto F = congruence::make_field(parse_coords(minpoly));
  auto lam = congruence::nf_make(F, parse_coords(lambda));
  std::vector<congruence::NFElem> nz;
  if (!nonzero.empty())
    for (const auto& part : split(nonzero, ';'))
      nz.push_back(congruence::nf_make(F, parse_coords(part)));
  auto map = congruence::find_prime_with_order(lam, congruence::Int(q), nz,
                                               ctx.cfg.prime_bound);
  auto body = congruence::describe(map) + "order " + std::to_string(q) + "\n";
  ctx.write_report("order_certificate.txt", body);
  std::cout << body;
}

void cmd_congr_separate(Ctx& ctx, const std::string& minpoly, const std::string& y,
                        const std::string& omega) {
  ctx.finalize();
  auto F = congruence::make_field(parse_coords(minpoly));
  auto ye = congruence::nf_make(F, parse_coords(y));
  auto om = congruence::nf_make(F, parse_coords(omega));
  auto map = congruence::separate_from_Zomega(ye, om, ctx.cfg.prime_bound);
  auto body = congruence::describe(map) + "claim image-outside-Z-omega\n";
  ctx.write_report("separate_certificate.txt", body);
  std::cout << body;
}

void cmd_congr_obstruct(Ctx& ctx, const std::string& minpoly, const std::string& r,
                        const std::string& u, const std::string& lambda, long long m,
                        long long n, long long v, const std::string& track,
                        const std::string& omega) {
  ctx.finalize();
  if (track != "m" && track != "n") fail(ErrorKind::BadInput, "--track must be m or n");
  auto F = congruence::make_field(parse_coords(minpoly));
  auto re = congruence::nf_make(F, parse_coords(r));
  auto ue = congruence::nf_make(F, parse_coords(u));
  auto lam = congruence::nf_make(F, parse_coords(lambda));
  congruence::OmegaCoords coords{m, n, v};
  congruence::NFElem om;
  const congruence::NFElem* omp = nullptr;
  if (!omega.empty()) {
    om = congruence::nf_make(F, parse_coords(omega));
    omp = &om;
  }
  auto cert = congruence::loxodromic_obstruction(re, ue, lam, coords, track[0], omp,
                                                 ctx.cfg.prime_bound);
  auto body = congruence::describe(cert);
  ctx.write_report("obstruct_certificate.txt", body);
  std::cout << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometric triangulations of drilled cusped hyperbolic 3-manifolds"};
  app.require_subcommand(1);
  Ctx ctx;
  app.add_option("--config", ctx.config_file, "key = value config file");
  app.add_option("--output-dir", ctx.cfg.output_dir, "directory for result files");

  std::string omega, triangle, diagonal, turns, emit = "tri";
  double height = 0.0, ell = 0.0;
  std::string complex_file, order_file, diagonals_file;
  std::string file, site, kind, out_file;
  int move_diagonal = 0;
  bool force = false;
  std::string start, path_turns;
  std::string minpoly, lambda_s, y_s, r_s, u_s, nonzero, track = "m", omega_coords;
  long long q = 0, cs_m = 0, cs_n = 0, cs_v = 1;

  auto* an = app.add_subcommand("ananas", "drilled ananas construction");
  an->require_subcommand(1);
  auto* ab = an->add_subcommand("build", "build one ananas node");
  ab->add_option("--omega", omega, "cusp modulus a+bi")->required();
  ab->add_option("--triangle", triangle, "Farey triangle p1/q1,p2/q2,p3/q3");
  ab->add_option("--diagonal", diagonal, "diagonal slope (with the base edge 0/1,1/0)");
  ab->callback([&] { cmd_ananas_build(ctx, omega, triangle, diagonal); });
  auto* aw = an->add_subcommand("walk", "walk the tree of diagonal exchanges");
  aw->add_option("--omega", omega, "cusp modulus a+bi")->required();
  aw->add_option("--path", turns, "turn word over L, R")->required();
  aw->add_option("--emit", emit, "tri|svg|both");
  aw->add_option("--triangle", triangle, "starting Farey triangle");
  aw->add_option("--diagonal", diagonal, "starting diagonal slope");
  aw->callback([&] { cmd_ananas_walk(ctx, omega, turns, emit, triangle, diagonal); });

  auto* ca = app.add_subcommand("canonical", "horoball packing analyses");
  ca->require_subcommand(1);
  auto* cr = ca->add_subcommand("rest", "resting ball of the packing");
  cr->add_option("--omega", omega, "cusp modulus a+bi")->required();
  cr->add_option("--height", height, "height of the horoball at infinity")->required();
  cr->callback([&] { cmd_canonical_rest(ctx, omega, height); });
  auto* cc = ca->add_subcommand("cellulation", "Delaunay cellulation of the cusp torus");
  cc->add_option("--omega", omega, "cusp modulus a+bi")->required();
  cc->callback([&] { cmd_canonical_cellulation(ctx, omega); });
  auto* cb = ca->add_subcommand("bound", "problematic distance bound L(ell)");
  cb->add_option("--ell", ell, "normalized cusp parameter")->required();
  cb->add_option("--omega", omega, "cusp modulus a+bi")->required();
  cb->callback([&] { cmd_canonical_bound(ctx, ell, omega); });

  auto* co = app.add_subcommand("cone", "iterated coning of polyhedral complexes");
  co->require_subcommand(1);
  auto* cn = co->add_subcommand("run", "cone a complex along a cusp order");
  cn->add_option("--complex", complex_file, "polyhedral complex file")->required();
  cn->add_option("--order", order_file, "cusp order file")->required();
  cn->add_option("--diagonals", diagonals_file, "cell face corner per line");
  cn->callback([&] { cmd_cone_run(ctx, complex_file, order_file, diagonals_file); });

  auto* tr = app.add_subcommand("tri", "ideal triangulation files");
  tr->require_subcommand(1);
  auto* tv = tr->add_subcommand("verify", "validate structure and geometry");
  tv->add_option("file", file, "triangulation file")->required();
  tv->callback([&] { cmd_tri_verify(ctx, file); });
  auto* tm = tr->add_subcommand("move", "apply a Pachner move");
  tm->add_option("file", file, "triangulation file")->required();
  tm->add_option("--site", site, "cell,face (2-3) or cell,a,b (3-2, 4-4)")->required();
  tm->add_option("--kind", kind, "23|32|44")->required();
  tm->add_option("--diagonal", move_diagonal, "4-4 replacement diagonal, 0 or 1");
  tm->add_flag("--force", force, "combinatorial move, drop shapes");
  tm->add_option("--out", out_file, "output file (default move.tri)");
  tm->callback([&] { cmd_tri_move(ctx, file, site, kind, move_diagonal, force, out_file); });

  auto* fa = app.add_subcommand("farey", "Farey complex walks");
  fa->require_subcommand(1);
  auto* fp = fa->add_subcommand("path", "non-backtracking dual-tree walk");
  fp->add_option("--start", start, "triangle p1/q1,p2/q2,p3/q3")->required();
  fp->add_option("--turns", path_turns, "turn word over L, R");
  fp->callback([&] { cmd_farey_path(ctx, start, path_turns); });

  auto* cg = app.add_subcommand("congr", "congruence certificates");
  cg->require_subcommand(1);
  auto* go = cg->add_subcommand("order", "prime with prescribed residue order");
  go->add_option("--minpoly", minpoly, "field minpoly, ascending rational coefficients")
      ->required();
  go->add_option("--lambda", lambda_s, "element coordinates in the power basis")
      ->required();
  go->add_option("--q", q, "required multiplicative order")->required();
  go->add_option("--nonzero", nonzero, "semicolon-separated elements kept nonzero");
  go->callback([&] { cmd_congr_order(ctx, minpoly, lambda_s, q, nonzero); });
  auto* gs = cg->add_subcommand("separate", "separate y from Z + Z omega");
  gs->add_option("--minpoly", minpoly, "field minpoly, ascending rational coefficients")
      ->required();
  gs->add_option("--y", y_s, "element coordinates in the power basis")->required();
  gs->add_option("--omega", omega_coords, "element coordinates in the power basis")
      ->required();
  gs->callback([&] { cmd_congr_separate(ctx, minpoly, y_s, omega_coords); });
  auto* gb = cg->add_subcommand("obstruct", "loxodromic trace obstruction");
  gb->add_option("--minpoly", minpoly, "field minpoly, ascending rational coefficients")
      ->required();
  gb->add_option("--r", r_s, "coordinates of r")->required();
  gb->add_option("--u", u_s, "coordinates of u")->required();
  gb->add_option("--lambda", lambda_s, "coordinates of lambda")->required();
  gb->add_option("--m", cs_m, "m* of the lowest-terms coset data")->required();
  gb->add_option("--n", cs_n, "n* of the lowest-terms coset data")->required();
  gb->add_option("--v", cs_v, "v* of the lowest-terms coset data")->required();
  gb->add_option("--track", track, "which coordinate carries the filter, m|n");
  gb->add_option("--omega", omega_coords, "coordinates of omega (independence filter)");
  gb->callback([&] {
    cmd_congr_obstruct(ctx, minpoly, r_s, u_s, lambda_s, cs_m, cs_n, cs_v, track,
                       omega_coords);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const geotri::Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::SearchExhausted ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return ctx.rc;
}
