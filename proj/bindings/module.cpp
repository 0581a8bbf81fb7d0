#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <fstream>
#include <sstream>
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

namespace py = pybind11;

namespace {

using geotri::ErrorKind;
using geotri::fail;
using geotri::hypgeom::Complex;
using geotri::hypgeom::ShapeParameter;
namespace ananas = geotri::ananas;
namespace canonical = geotri::canonical;
namespace congruence = geotri::congruence;
namespace coning = geotri::coning;
namespace farey = geotri::farey;
namespace tri = geotri::tri;

std::vector<congruence::Rat> coords(const std::vector<std::string>& parts) {
  std::vector<congruence::Rat> out;
  for (const auto& s : parts) {
    try {
      out.emplace_back(s);
    } catch (const std::exception&) {
      fail(ErrorKind::ParseError, "bad rational '" + s + "'");
    }
  }
  return out;
}

congruence::NFElem elem(const congruence::FieldPtr& F, const std::vector<std::string>& c) {
  return congruence::nf_make(F, coords(c));
}

long long to_ll(const farey::Int& x) { return x.convert_to<long long>(); }

ananas::CuspLattice lattice_of(Complex omega, double tol) {
  return ananas::CuspLattice::reduce(omega, tol);
}

}  // namespace

PYBIND11_MODULE(_geotri, m) {
  m.doc() = "geometric ideal triangulations of drilled cusped hyperbolic 3-manifolds";

  py::register_exception<geotri::Error>(m, "GeotriError");

  // ------------------------------------------------------------------ hypgeom
  m.def(
      "tet_volume", [](Complex z) { return geotri::hypgeom::tet_volume(ShapeParameter(z)); },
      py::arg("z"), "volume of the ideal tetrahedron with shape z");
  m.def(
      "dihedral_angles",
      [](Complex z) { return geotri::hypgeom::dihedral_angles(ShapeParameter(z)).theta; },
      py::arg("z"));

  // ------------------------------------------------------------ triangulation
  py::class_<tri::IdealTriangulation>(m, "Triangulation")
      .def_property_readonly("size", &tri::IdealTriangulation::size)
      .def("has_shapes", &tri::IdealTriangulation::has_shapes)
      .def("volume", &tri::IdealTriangulation::volume)
      .def("validate", &tri::IdealTriangulation::validate)
      .def("euler_characteristic", &tri::IdealTriangulation::euler_characteristic)
      .def(
          "verify",
          [](const tri::IdealTriangulation& t, double tol) {
            auto rep = tri::verify_geometric(t, tol);
            return py::make_tuple(rep.pass, rep.summary());
          },
          py::arg("tol") = 1e-9, "returns (pass, summary)")
      .def(
          "shapes",
          [](const tri::IdealTriangulation& t) {
            std::vector<Complex> out;
            for (const auto& c : t.cells) out.push_back(c.shape ? c.shape->z : Complex(0.0));
            return out;
          })
      .def("save", [](const tri::IdealTriangulation& t, const std::string& path) {
        tri::write_triangulation(t, path);
      })
      .def("__str__", [](const tri::IdealTriangulation& t) {
        std::ostringstream os;
        tri::write_triangulation(t, os);
        return os.str();
      });
  m.def("load_triangulation", &tri::read_triangulation_file, py::arg("path"));
  m.def(
      "parse_triangulation",
      [](const std::string& text) {
        std::istringstream is(text);
        return tri::read_triangulation(is);
      },
      py::arg("text"));
  m.def(
      "pachner_23",
      [](const tri::IdealTriangulation& t, int cell, int face, bool force, double tol) {
        return tri::pachner_23(t, tri::PachnerSite::at_face(cell, face), force, tol);
      },
      py::arg("t"), py::arg("cell"), py::arg("face"), py::arg("force") = false,
      py::arg("tol") = 1e-9);
  m.def(
      "pachner_32",
      [](const tri::IdealTriangulation& t, int cell, int a, int b, bool force, double tol) {
        return tri::pachner_32(t, tri::PachnerSite::at_edge(cell, a, b), force, tol);
      },
      py::arg("t"), py::arg("cell"), py::arg("a"), py::arg("b"), py::arg("force") = false,
      py::arg("tol") = 1e-9);
  m.def(
      "pachner_44",
      [](const tri::IdealTriangulation& t, int cell, int a, int b, int diagonal, bool force,
         double tol) {
        return tri::pachner_44(t, tri::PachnerSite::at_edge(cell, a, b), diagonal, force, tol);
      },
      py::arg("t"), py::arg("cell"), py::arg("a"), py::arg("b"), py::arg("diagonal") = 0,
      py::arg("force") = false, py::arg("tol") = 1e-9);
  m.def("isomorphic", &tri::isomorphic, py::arg("t1"), py::arg("t2"));

  // -------------------------------------------------------------------- farey
  m.def(
      "farey_path",
      [](const std::string& start, const std::string& turns) {
        std::vector<std::string> out;
        for (const auto& t : farey::path_to_slope_limit(farey::parse_triangle(start), turns))
          out.push_back(t.str());
        return out;
      },
      py::arg("start"), py::arg("turns"), "triangle strings along a dual-tree walk");

  // ------------------------------------------------------------------- ananas
  py::class_<ananas::DrilledAnanasState>(m, "Ananas")
      .def_property_readonly(
          "omega", [](const ananas::DrilledAnanasState& a) { return a.lattice.omega; })
      .def_property_readonly(
          "triangle", [](const ananas::DrilledAnanasState& a) { return a.triangle().str(); })
      .def_property_readonly("depth",
                             [](const ananas::DrilledAnanasState& a) { return a.peeled.size(); })
      .def("core_volume", &ananas::DrilledAnanasState::core_volume)
      .def("boundary_angles",
           [](const ananas::DrilledAnanasState& a) { return ananas::boundary_angles(a); })
      .def("to_triangulation",
           [](const ananas::DrilledAnanasState& a) { return ananas::to_triangulation(a); })
      .def("cellulation_svg",
           [](const ananas::DrilledAnanasState& a) { return ananas::cellulation_svg(a); });
  m.def(
      "build_ananas",
      [](Complex omega, const std::string& triangle, double tol) {
        return ananas::build(lattice_of(omega, tol), farey::parse_triangle(triangle));
      },
      py::arg("omega"), py::arg("triangle") = "0/1,1/0,1/1", py::arg("tol") = 1e-9);
  m.def(
      "peel",
      [](const ananas::DrilledAnanasState& a, const std::string& slope, double tol) {
        auto [shape, next] = ananas::peel(a, farey::parse_slope(slope), tol);
        return py::make_tuple(shape.z, next);
      },
      py::arg("ananas"), py::arg("slope"), py::arg("tol") = 1e-9);
  m.def(
      "tree_walk",
      [](const ananas::DrilledAnanasState& a0, const std::string& turns, double tol) {
        return ananas::tree_walk(a0, turns, tol);
      },
      py::arg("ananas"), py::arg("turns"), py::arg("tol") = 1e-9);

  // ---------------------------------------------------------------- canonical
  m.def(
      "resting_ball",
      [](Complex omega, double height, double tol) {
        canonical::PackingScene s;
        s.lattice = lattice_of(omega, tol);
        s.full_height = height;
        auto b = canonical::resting_ball(s, tol);
        std::vector<std::pair<long long, long long>> tang;
        for (const auto& v : b.tangencies) tang.emplace_back(to_ll(v.m), to_ll(v.n));
        py::dict out;
        out["center"] = b.center;
        out["height"] = b.height;
        out["radius"] = b.radius;
        out["tangencies"] = tang;
        out["residuals"] = b.residuals;
        out["rectangular"] = tang.size() == 4;
        return out;
      },
      py::arg("omega"), py::arg("height"), py::arg("tol") = 1e-9);
  m.def(
      "cusp_cellulation",
      [](Complex omega, double tol) {
        auto cc = canonical::cusp_cellulation(lattice_of(omega, tol), tol);
        py::dict out;
        out["rectangular"] = cc.rectangular;
        out["cells"] = cc.cells.size();
        std::vector<double> radii;
        for (const auto& c : cc.cells) radii.push_back(c.circumradius);
        out["circumradii"] = radii;
        return out;
      },
      py::arg("omega"), py::arg("tol") = 1e-9);
  m.def(
      "problematic_bound",
      [](double ell, Complex omega, double tol) {
        return canonical::problematic_bound(ell, lattice_of(omega, tol));
      },
      py::arg("ell"), py::arg("omega"), py::arg("tol") = 1e-9);
  m.def("critical_diameter", &canonical::critical_diameter, py::arg("w"), py::arg("mu"));

  // ------------------------------------------------------------------- coning
  m.def(
      "cone_complex",
      [](const std::string& complex_path, const std::string& order_path) {
        std::ifstream cf(complex_path);
        if (!cf) fail(ErrorKind::BadInput, "cannot read " + complex_path);
        auto c = coning::read_complex(cf);
        std::ifstream of(order_path);
        if (!of) fail(ErrorKind::BadInput, "cannot read " + order_path);
        auto o = coning::read_order(of);
        return coning::choose_diagonals(coning::iterated_cone(c, o));
      },
      py::arg("complex_path"), py::arg("order_path"),
      "iterated coning of a polyhedral complex file along a cusp order file");

  // --------------------------------------------------------------- congruence
  m.def(
      "find_prime_with_order",
      [](const std::vector<std::string>& minpoly, const std::vector<std::string>& lam,
         long long q, long long bound) {
        auto F = congruence::make_field(coords(minpoly));
        auto map = congruence::find_prime_with_order(elem(F, lam), congruence::Int(q), {}, bound);
        return congruence::describe(map);
      },
      py::arg("minpoly"), py::arg("lam"), py::arg("q"), py::arg("bound") = 100000);
  m.def(
      "separate_from_Zomega",
      [](const std::vector<std::string>& minpoly, const std::vector<std::string>& y,
         const std::vector<std::string>& omega, long long bound) {
        auto F = congruence::make_field(coords(minpoly));
        auto map = congruence::separate_from_Zomega(elem(F, y), elem(F, omega), bound);
        return congruence::describe(map);
      },
      py::arg("minpoly"), py::arg("y"), py::arg("omega"), py::arg("bound") = 100000);
  m.def(
      "loxodromic_obstruction",
      [](const std::vector<std::string>& minpoly, const std::vector<std::string>& r,
         const std::vector<std::string>& u, const std::vector<std::string>& lam, long long mm,
         long long nn, long long vv, const std::string& track,
         const std::optional<std::vector<std::string>>& omega, long long bound) {
        if (track != "m" && track != "n") fail(ErrorKind::BadInput, "track must be m or n");
        auto F = congruence::make_field(coords(minpoly));
        congruence::OmegaCoords oc{mm, nn, vv};
        congruence::NFElem om;
        const congruence::NFElem* omp = nullptr;
        if (omega) {
          om = elem(F, *omega);
          omp = &om;
        }
        auto cert = congruence::loxodromic_obstruction(elem(F, r), elem(F, u), elem(F, lam), oc,
                                                       track[0], omp, bound);
        return congruence::describe(cert);
      },
      py::arg("minpoly"), py::arg("r"), py::arg("u"), py::arg("lam"), py::arg("m"), py::arg("n"),
      py::arg("v"), py::arg("track") = "m", py::arg("omega") = std::nullopt,
      py::arg("bound") = 100000);
  m.def(
      "sl2_trace_separation",
      [](int q, std::array<int, 4> x, std::array<int, 4> y) {
        return congruence::sl2_trace_separation(q, x, y);
      },
      py::arg("q"), py::arg("x"), py::arg("y"));
  m.def(
      "sl2_conjugate",
      [](int q, std::array<int, 4> x, std::array<int, 4> y) {
        return congruence::sl2_conjugate(q, x, y);
      },
      py::arg("q"), py::arg("x"), py::arg("y"));
}
