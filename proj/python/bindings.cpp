#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ruc/fixtures.hpp"
#include "ruc/io.hpp"

namespace py = pybind11;
using namespace ruc;

namespace {

MaterialSet materials_from_dict(const py::dict& d) {
    MaterialSet out;
    for (auto item : d) {
        const int tag = py::cast<int>(item.first);
        Material m;
        const py::dict entry = py::cast<py::dict>(item.second);
        if (entry.contains("C")) {
            m.stiffness_voigt = py::cast<Matrix>(entry["C"]);
        } else {
            m.E = py::cast<double>(entry["E"]);
            m.nu = py::cast<double>(entry["nu"]);
        }
        out[tag] = std::move(m);
    }
    return out;
}

MacroStrain strain_from_object(const CellSpec& spec, const py::object& obj) {
    const auto arr = py::cast<Eigen::MatrixXd>(obj);
    if (arr.cols() == 1)
        return MacroStrain::from_voigt(spec.dim, Vector(arr.col(0)));
    return MacroStrain(Matrix(arr));
}

PlaneKind plane_from_string(const std::string& plane) {
    if (plane == "stress") return PlaneKind::stress;
    if (plane == "strain") return PlaneKind::strain;
    throw Error("InvalidOption", "plane", "plane must be 'strain' or 'stress'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "reduced unit cell toolkit: periodic boundary conditions from sub-domain "
              "equivalence relations";

    py::register_exception<Error>(m, "RucError");

    py::class_<CellSpec>(m, "CellSpec")
        .def_property_readonly("dim", [](const CellSpec& s) { return dim_value(s.dim); })
        .def_property_readonly("n_relations", &CellSpec::n)
        .def_property_readonly("kind", [](const CellSpec& s) { return to_string(s.kind); })
        .def_property_readonly("labels",
                               [](const CellSpec& s) {
                                   std::vector<std::string> out;
                                   for (const auto& r : s.relations) out.push_back(r.label);
                                   return out;
                               })
        .def("to_json", [](const CellSpec& s) { return spec_to_json(s).dump(2); })
        .def("__repr__", [](const CellSpec& s) {
            return "<CellSpec " + to_string(s.kind) + " dim=" + std::to_string(dim_value(s.dim)) +
                   " relations=" + std::to_string(s.n()) + ">";
        });

    py::class_<Mesh>(m, "Mesh")
        .def_property_readonly("n_nodes", &Mesh::n_nodes)
        .def_property_readonly("n_elements", &Mesh::n_elements)
        .def_property_readonly("dim", [](const Mesh& mesh) { return dim_value(mesh.dim()); })
        .def("node", [](const Mesh& mesh, int i) { return Vector(mesh.node(i)); })
        .def("boundary_nodes", [](const Mesh& mesh) { return mesh.boundary_nodes(); })
        .def("to_json", [](const Mesh& mesh) { return mesh_to_json(mesh).dump(); })
        .def("__repr__", [](const Mesh& mesh) {
            return "<Mesh dim=" + std::to_string(dim_value(mesh.dim())) +
                   " nodes=" + std::to_string(mesh.n_nodes()) +
                   " elements=" + std::to_string(mesh.n_elements()) + ">";
        });

    py::class_<GammaAssignment>(m, "GammaAssignment")
        .def_readonly("admissible", &GammaAssignment::admissible)
        .def_readonly("gammas", &GammaAssignment::gammas)
        .def_readonly("residuals", &GammaAssignment::residuals)
        .def_readonly("worst_relation", &GammaAssignment::worst_relation)
        .def_readonly("worst_residual", &GammaAssignment::worst_residual);

    py::class_<LoadCase>(m, "LoadCase")
        .def_readonly("gammas", &LoadCase::gammas)
        .def_property_readonly("basis", [](const LoadCase& lc) { return Matrix(lc.basis); })
        .def_property_readonly("dimension", &LoadCase::dimension)
        .def("contains", [](const LoadCase& lc, const Vector& v) { return lc.contains(v); });

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_property_readonly("ok", &ValidationReport::ok)
        .def_property_readonly("summary", &ValidationReport::summary)
        .def("to_json",
             [](const ValidationReport& r) { return validation_report_to_json(r).dump(2); });

    py::class_<FieldSolution>(m, "FieldSolution")
        .def_readonly("u", &FieldSolution::u)
        .def_readonly("volume", &FieldSolution::volume)
        .def_readonly("gammas", &FieldSolution::gammas)
        .def_readonly("constraint_residual", &FieldSolution::constraint_residual)
        .def_readonly("rotation_norm", &FieldSolution::rotation_norm)
        .def_readonly("fluctuation_max", &FieldSolution::fluctuation_max)
        .def_property_readonly("average_strain",
                               [](const FieldSolution& s) { return Matrix(s.average_strain()); })
        .def_property_readonly("average_stress",
                               [](const FieldSolution& s) { return Matrix(s.average_stress()); });

    py::class_<HomogenizedStiffness>(m, "HomogenizedStiffness")
        .def_property_readonly("C", [](const HomogenizedStiffness& h) { return Matrix(h.C); })
        .def_readonly("asymmetry", &HomogenizedStiffness::asymmetry)
        .def_readonly("case_of_column", &HomogenizedStiffness::case_of_column)
        .def_property_readonly("complete", &HomogenizedStiffness::complete);

    py::class_<EquivalenceReport>(m, "EquivalenceReport")
        .def_readonly("max_strain_residual", &EquivalenceReport::max_strain_residual)
        .def_readonly("max_stress_residual", &EquivalenceReport::max_stress_residual)
        .def_readonly("compared", &EquivalenceReport::compared)
        .def_readonly("missing", &EquivalenceReport::missing)
        .def_readonly("placements", &EquivalenceReport::placements);

    m.def("load_spec", [](const std::string& text) { return spec_from_json(Json::parse(text)); },
          py::arg("json_text"), "parse a cell spec from its JSON text");
    m.def("load_mesh", [](const std::string& text) { return mesh_from_json(Json::parse(text)); },
          py::arg("json_text"));
    m.def("validate", [](const CellSpec& spec) { return validate(spec); }, py::arg("spec"));
    m.def("validate_with_mesh",
          [](const CellSpec& spec, const Mesh& mesh) { return validate(spec, &mesh); });
    m.def("enumerate_load_cases",
          [](const CellSpec& spec) { return enumerate_load_cases(spec); });
    m.def("check_admissibility",
          [](const CellSpec& spec, const py::object& eps, double tol) {
              return check_admissibility(spec, strain_from_object(spec, eps), tol);
          },
          py::arg("spec"), py::arg("macro_strain"), py::arg("tol") = Tol::admissibility,
          "macro_strain: dxd tensor or Voigt vector (engineering shear)");
    m.def("solve",
          [](const Mesh& mesh, const CellSpec& spec, const py::dict& materials,
             const py::object& eps, const std::string& plane, int threads) {
              return solve_ruc(mesh, spec, materials_from_dict(materials),
                               strain_from_object(spec, eps), plane_from_string(plane), threads);
          },
          py::arg("mesh"), py::arg("spec"), py::arg("materials"), py::arg("macro_strain"),
          py::arg("plane") = "strain", py::arg("threads") = 1);
    m.def("homogenize",
          [](const Mesh& mesh, const CellSpec& spec, const py::dict& materials,
             const std::string& plane, int threads) {
              return homogenize(mesh, spec, materials_from_dict(materials),
                                plane_from_string(plane), threads);
          },
          py::arg("mesh"), py::arg("spec"), py::arg("materials"), py::arg("plane") = "strain",
          py::arg("threads") = 1);
    m.def("verify_equivalence",
          [](const FieldSolution& uc, const FieldSolution& ruc, const CellSpec& ruc_spec,
             const CellSpec& uc_spec, const std::vector<int>& gammas) {
              return verify_equivalence(uc, ruc, ruc_spec, uc_spec, gammas);
          });
    m.def("constraints_json",
          [](const Mesh& mesh, const CellSpec& spec, const py::object& eps) {
              const auto graph = pair_boundary_nodes(mesh, spec);
              const auto resolved = resolve(graph, mesh, spec);
              const auto equations =
                  build_constraints(resolved, spec, strain_from_object(spec, eps));
              return emit(equations, spec.dim, ConstraintFormat::json);
          },
          py::arg("mesh"), py::arg("spec"), py::arg("macro_strain"),
          "pair, resolve and emit the constraint equations as JSON text");

    auto fx = m.def_submodule("fixtures", "bundled example cells");
    fx.def("woven3d_spec", &fixtures::woven3d_spec);
    fx.def("woven3d_mesh", &fixtures::woven3d_mesh, py::arg("refine") = 1);
    fx.def("honeycomb_spec", &fixtures::honeycomb_spec);
    fx.def("honeycomb_ruc_mesh", &fixtures::honeycomb_ruc_mesh, py::arg("refine") = 1);
    fx.def("honeycomb_uc_spec", &fixtures::honeycomb_uc_spec);
    fx.def("honeycomb_uc_mesh", &fixtures::honeycomb_uc_mesh, py::arg("refine") = 1);
    fx.def("checkerboard_ruc_spec", &fixtures::checkerboard_ruc_spec);
    fx.def("checkerboard_ruc_mesh", &fixtures::checkerboard_ruc_mesh, py::arg("refine") = 1);
    fx.def("checkerboard_uc_spec", &fixtures::checkerboard_uc_spec);
    fx.def("checkerboard_uc_mesh", &fixtures::checkerboard_uc_mesh, py::arg("refine") = 1);
    fx.def("write_all", &fixtures::write_all, py::arg("dir"));
}
