#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latcell/asymptotics.hpp"
#include "latcell/cli.hpp"
#include "latcell/energy.hpp"
#include "latcell/geometry.hpp"
#include "latcell/lattice.hpp"
#include "latcell/material.hpp"
#include "latcell/oracle.hpp"
#include "latcell/report.hpp"
#include "latcell/scene.hpp"

namespace py = pybind11;
using namespace latcell;

// keep the deformation variant an opaque handle instead of letting the
// stl caster unpack it into its (unregistered) alternatives
PYBIND11_MAKE_OPAQUE(material::Deformation);

namespace {

BoundaryRule rule_from_string(const std::string& tag) {
  if (tag == "closed") return BoundaryRule::Closed;
  if (tag == "halfopen") return BoundaryRule::HalfOpen;
  throw ValidationError("boundary rule must be 'closed' or 'halfopen'");
}

std::string dump(const nlohmann::json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_latcell, m) {
  m.doc() = "lattice-cell energies of deformed crystals";

  py::register_exception<ValidationError>(m, "SceneValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalFailure", PyExc_ArithmeticError);

  py::class_<lattice::BravaisLattice>(m, "BravaisLattice")
      .def_static("cubic", &lattice::BravaisLattice::cubic)
      .def_static("from_basis", &lattice::BravaisLattice::from_basis, py::arg("basis"))
      .def_property_readonly("basis",
                             [](const lattice::BravaisLattice& l) { return l.basis(); })
      .def("cell_volume", &lattice::BravaisLattice::cell_volume)
      .def("is_integer", &lattice::BravaisLattice::is_integer);

  py::class_<geometry::ConvexPolytope>(m, "ConvexPolytope")
      .def_static("from_box", &geometry::ConvexPolytope::from_box, py::arg("lo"),
                  py::arg("hi"))
      .def_static("from_vertices", &geometry::ConvexPolytope::from_vertices,
                  py::arg("points"))
      .def("volume", &geometry::ConvexPolytope::volume)
      .def("diameter", &geometry::ConvexPolytope::diameter)
      .def("contains",
           [](const geometry::ConvexPolytope& p, const Vec3& x, const std::string& rule) {
             return p.contains(x, rule_from_string(rule));
           },
           py::arg("x"), py::arg("rule") = "closed");

  m.def("ball_polytope", &geometry::make_ball_polytope, py::arg("center"),
        py::arg("radius"), py::arg("refinement") = 3);

  py::class_<material::PairPotential>(m, "PairPotential")
      .def("radial", &material::PairPotential::radial, py::arg("r"))
      .def("__call__",
           [](const material::PairPotential& phi, const Vec3& z) { return phi(z); })
      .def("cutoff", &material::PairPotential::cutoff)
      .def_property_readonly("name", &material::PairPotential::name);

  m.def("builtin_potential", &material::builtin_potential, py::arg("name"),
        py::arg("params") = std::map<std::string, double>{});

  py::class_<material::Deformation>(m, "Deformation");
  m.def("affine_deformation", [](const Mat3& F) {
    return material::Deformation(material::AffineDeformation{F});
  });
  m.def(
      "piecewise_deformation",
      [](const Mat3& F_minus, const Vec3& a, const IVec3& miller, const Vec3& anchor) {
        auto plane =
            geometry::InterfacePlane::from_miller(lattice::miller_reduce(miller), anchor);
        return material::Deformation(
            material::PiecewiseAffineDeformation{F_minus, a, plane});
      },
      py::arg("F_minus"), py::arg("a"), py::arg("miller"),
      py::arg("anchor") = Vec3(Vec3::Zero()));

  m.def("cauchy_born_W", &material::cauchy_born_W, py::arg("potential"),
        py::arg("lattice"), py::arg("F"));

  m.def(
      "discrete_energy",
      [](const geometry::ConvexPolytope& omega, const lattice::BravaisLattice& lat,
         double eps, const material::Deformation& d, const material::PairPotential& phi,
         const std::string& rule, int threads) {
        return energy::discrete_energy(omega, lat, eps, d, phi, rule_from_string(rule),
                                       threads);
      },
      py::arg("omega"), py::arg("lattice"), py::arg("eps"), py::arg("deformation"),
      py::arg("potential"), py::arg("rule") = "closed", py::arg("threads") = 1);

  m.def(
      "cell_avg_energy",
      [](const geometry::ConvexPolytope& omega, const lattice::BravaisLattice& lat,
         double eps, const material::Deformation& d, const material::PairPotential& phi) {
        return energy::cell_avg_energy(omega, lat, eps, d, phi);
      },
      py::arg("omega"), py::arg("lattice"), py::arg("eps"), py::arg("deformation"),
      py::arg("potential"));

  m.def("gamma", &energy::gamma, py::arg("potential"), py::arg("lattice"), py::arg("F"),
        py::arg("n"));
  m.def(
      "gamma_diamond",
      [](const material::PairPotential& phi, const lattice::BravaisLattice& lat,
         const Mat3& F, const IVec3& miller) {
        return energy::gamma_diamond(phi, lat, F, lattice::miller_reduce(miller));
      },
      py::arg("potential"), py::arg("lattice"), py::arg("F"), py::arg("miller"));
  m.def(
      "sigma",
      [](const material::PairPotential& phi, const lattice::BravaisLattice& lat,
         const Mat3& F_plus, const Mat3& F_minus, const Vec3& n_hat, int order) {
        auto r = energy::sigma(phi, lat, F_plus, F_minus, n_hat, order);
        return std::make_pair(r.sigma, r.sigma_hat);
      },
      py::arg("potential"), py::arg("lattice"), py::arg("F_plus"), py::arg("F_minus"),
      py::arg("n_hat"), py::arg("order") = 32);
  m.def(
      "tau",
      [](const material::PairPotential& phi, const lattice::BravaisLattice& lat,
         const Mat3& F_plus, const Mat3& F_minus, const IVec3& miller) {
        auto r = energy::tau(phi, lat, F_plus, F_minus, lattice::miller_reduce(miller));
        return std::make_pair(r.tau, r.tau_hat);
      },
      py::arg("potential"), py::arg("lattice"), py::arg("F_plus"), py::arg("F_minus"),
      py::arg("miller"));

  m.def(
      "predict_expansion",
      [](const std::string& kind, const geometry::ConvexPolytope& omega,
         const lattice::BravaisLattice& lat, const material::Deformation& d,
         const material::PairPotential& phi) {
        auto b = energy::predict_expansion(energy::expansion_kind_from_string(kind),
                                           omega, lat, d, phi);
        py::dict out;
        out["bulk"] = b.bulk_prediction;
        out["surface"] = b.surface_prediction;
        out["interface"] = b.interface_prediction;
        return out;
      },
      py::arg("kind"), py::arg("omega"), py::arg("lattice"), py::arg("deformation"),
      py::arg("potential"));

  m.def("lattice_remainder",
        [](const geometry::ConvexPolytope& omega, const lattice::BravaisLattice& lat,
           double eps, const std::string& rule) {
          return lattice::lattice_remainder(omega, lat, eps, rule_from_string(rule));
        },
        py::arg("omega"), py::arg("lattice"), py::arg("eps"), py::arg("rule") = "closed");

  m.def("translate_average_count",
        [](const geometry::ConvexPolytope& omega, const lattice::BravaisLattice& lat,
           double eps, int grid, const std::string& rule) {
          return oracle::translate_average_count(omega, lat, eps, grid,
                                                 rule_from_string(rule));
        },
        py::arg("omega"), py::arg("lattice"), py::arg("eps"), py::arg("grid"),
        py::arg("rule") = "halfopen");

  m.def("parse_scene_json",
        [](const std::string& text) { return dump(scene::parse_scene_text(text).spec); },
        py::arg("text"));

  m.def("verify_proposition_json",
        [](const std::string& prop, const std::string& scene_text) {
          auto s = scene::parse_scene_text(scene_text);
          auto rep = asymptotics::verify_proposition(
              asymptotics::proposition_from_string(prop), s);
          return dump(report::expansion_summary_json(rep));
        },
        py::arg("proposition"), py::arg("scene_text"));

  m.def("density_table_json",
        [](const std::string& scene_text) {
          auto s = scene::parse_scene_text(scene_text);
          return dump(report::density_table_json(cli::build_density_table(s)));
        },
        py::arg("scene_text"));
}
