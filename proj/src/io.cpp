#include "ruc/io.hpp"

#include <fstream>
#include <sstream>

namespace ruc {

namespace {

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Vector vector_from_json(const Json& j) {
    Vector v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
    return v;
}

Json matrix_to_json(const Matrix& m) {
    Json out = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        out.push_back(std::move(row));
    }
    return out;
}

Matrix matrix_from_json(const Json& j) {
    const int rows = static_cast<int>(j.size());
    const int cols = rows ? static_cast<int>(j[0].size()) : 0;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
    return m;
}

const char* axis_name(int a) {
    static const char* names[3] = {"x", "y", "z"};
    return names[a];
}

Json region_to_json(const BoundaryRegion& region) {
    Json out = Json::object();
    for (int a = 0; a < region.dim(); ++a) {
        const auto& ax = region.axes()[a];
        if (ax.fixed())
            out[axis_name(a)] = ax.lo;
        else
            out[axis_name(a)] = Json::array({ax.lo, ax.hi});
    }
    return out;
}

BoundaryRegion region_from_json(const Json& j, int dim) {
    std::vector<BoundaryRegion::Axis> axes(dim);
    for (int a = 0; a < dim; ++a) {
        if (!j.contains(axis_name(a)))
            throw Error("InvalidSpec", "source", "region is missing axis " +
                                                      std::string(axis_name(a)));
        const Json& e = j.at(axis_name(a));
        if (e.is_array()) {
            axes[a] = {e[0].get<double>(), e[1].get<double>()};
        } else {
            const double v = e.get<double>();
            axes[a] = {v, v};
        }
    }
    return BoundaryRegion(std::move(axes));
}

}  // namespace

Json spec_to_json(const CellSpec& spec) {
    Json j;
    j["dim"] = dim_value(spec.dim);
    j["bbox"] = Json::array();
    for (const auto& b : spec.bbox) j["bbox"].push_back(Json::array({b.min, b.max}));
    j["kind"] = to_string(spec.kind);
    j["periodicity"] = Json::array();
    for (const auto& dvec : spec.periodicity) j["periodicity"].push_back(vector_to_json(dvec));
    j["relations"] = Json::array();
    for (const auto& rel : spec.relations) {
        Json r;
        r["label"] = rel.label;
        r["T"] = matrix_to_json(rel.T.matrix());
        r["offset"] = vector_to_json(rel.offset);
        r["source"] = region_to_json(rel.source_region);
        j["relations"].push_back(std::move(r));
    }
    if (!spec.free_regions.empty()) {
        j["free"] = Json::array();
        for (const auto& region : spec.free_regions) j["free"].push_back(region_to_json(region));
    }
    return j;
}

CellSpec spec_from_json(const Json& j) {
    CellSpec spec;
    const int d = j.at("dim").get<int>();
    if (d != 2 && d != 3) throw Error("InvalidSpec", "dim", "dim must be 2 or 3");
    spec.dim = d == 2 ? Dim::two : Dim::three;
    for (const auto& b : j.at("bbox"))
        spec.bbox.push_back({b[0].get<double>(), b[1].get<double>()});
    if (j.contains("kind")) spec.kind = cell_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("periodicity"))
        for (const auto& v : j.at("periodicity")) spec.periodicity.push_back(vector_from_json(v));
    for (const auto& r : j.at("relations")) {
        EquivalenceRelation rel;
        rel.label = r.at("label").get<std::string>();
        rel.T = Transform(matrix_from_json(r.at("T")));
        rel.offset = vector_from_json(r.at("offset"));
        rel.source_region = region_from_json(r.at("source"), d);
        spec.relations.push_back(std::move(rel));
    }
    if (j.contains("free"))
        for (const auto& f : j.at("free")) spec.free_regions.push_back(region_from_json(f, d));
    return spec;
}

Json mesh_to_json(const Mesh& mesh) {
    Json j;
    j["dim"] = dim_value(mesh.dim());
    j["nodes"] = Json::array();
    for (const auto& x : mesh.nodes()) j["nodes"].push_back(vector_to_json(x));
    j["elements"] = Json::array();
    for (const auto& e : mesh.elements()) j["elements"].push_back(e);
    j["materials"] = mesh.material_tags();
    return j;
}

Mesh mesh_from_json(const Json& j) {
    const int d = j.at("dim").get<int>();
    const Dim dim = d == 2 ? Dim::two : Dim::three;
    std::vector<Vector> nodes;
    for (const auto& n : j.at("nodes")) nodes.push_back(vector_from_json(n));
    std::vector<std::vector<int>> elements;
    for (const auto& e : j.at("elements")) elements.push_back(e.get<std::vector<int>>());
    std::vector<int> tags;
    if (j.contains("materials")) tags = j.at("materials").get<std::vector<int>>();
    return Mesh(dim, std::move(nodes), std::move(elements), std::move(tags));
}

Json materials_to_json(const MaterialSet& materials) {
    Json j;
    j["materials"] = Json::object();
    for (const auto& [tag, m] : materials) {
        Json e;
        if (m.isotropic()) {
            e["E"] = *m.E;
            e["nu"] = *m.nu;
        } else {
            e["C"] = matrix_to_json(*m.stiffness_voigt);
        }
        j["materials"][std::to_string(tag)] = std::move(e);
    }
    return j;
}

MaterialSet materials_from_json(const Json& j) {
    MaterialSet out;
    const Json& block = j.contains("materials") ? j.at("materials") : j;
    for (auto it = block.begin(); it != block.end(); ++it) {
        Material m;
        if (it.value().contains("C")) {
            m.stiffness_voigt = matrix_from_json(it.value().at("C"));
        } else {
            m.E = it.value().at("E").get<double>();
            m.nu = it.value().at("nu").get<double>();
        }
        out[std::stoi(it.key())] = std::move(m);
    }
    return out;
}

Json load_to_json(Dim dim, const MacroStrain& eps) {
    Json j;
    j["macro_strain_voigt"] = vector_to_json(strain_to_voigt(dim, eps.tensor));
    return j;
}

MacroStrain load_from_json(const Json& j, Dim dim) {
    return MacroStrain::from_voigt(dim, vector_from_json(j.at("macro_strain_voigt")));
}

Json validation_report_to_json(const ValidationReport& report) {
    Json j;
    j["ok"] = report.ok();
    j["issues"] = Json::array();
    for (const auto& issue : report.issues) {
        Json e;
        e["severity"] = issue.severity == ValidationIssue::Severity::error ? "error" : "warning";
        e["code"] = issue.code;
        e["entity"] = issue.entity;
        e["message"] = issue.message;
        j["issues"].push_back(std::move(e));
    }
    return j;
}

Json gamma_assignment_to_json(const CellSpec& spec, const GammaAssignment& g) {
    Json j;
    j["admissible"] = g.admissible;
    if (g.admissible) {
        j["gamma"] = g.gammas;
        Json per = Json::object();
        for (int i = 0; i < spec.n(); ++i) {
            per[spec.relations[i].label] =
                Json{{"gamma", g.gammas[i]}, {"residual", g.residuals[i]}};
        }
        j["relations"] = std::move(per);
    } else {
        j["worst_relation"] = g.worst_relation;
        j["worst_residual"] = g.worst_residual;
    }
    return j;
}

Json load_cases_to_json(const CellSpec& spec, const std::vector<LoadCase>& cases) {
    Json j = Json::array();
    const auto labels = voigt_labels(spec.dim);
    for (size_t c = 0; c < cases.size(); ++c) {
        Json e;
        e["case"] = c + 1;
        e["gamma"] = cases[c].gammas;
        e["dimension"] = cases[c].dimension();
        e["basis"] = matrix_to_json(cases[c].basis.transpose());  // one row per basis tensor
        Json comps = Json::array();
        for (int i = 0; i < cases[c].basis.rows(); ++i) {
            if (cases[c].basis.row(i).cwiseAbs().maxCoeff() > 1e-9) comps.push_back(labels[i]);
        }
        e["components"] = std::move(comps);
        j.push_back(std::move(e));
    }
    return j;
}

Json pairs_to_json(const CellSpec& spec, const ResolvedPairing& pairing, const Mesh& mesh) {
    Json j;
    j["pairs"] = Json::array();
    for (const auto& p : pairing.pairs) {
        Json e;
        e["slave"] = p.slave;
        e["master"] = p.master;
        e["relation_chain"] = p.chain_labels(spec);
        e["T_composed"] = matrix_to_json(p.map.T.matrix());
        e["offset_composed"] = vector_to_json(p.map.offset);
        if (p.self_pair) e["self_pair"] = true;
        if (p.redundant) e["redundant"] = true;
        j["pairs"].push_back(std::move(e));
    }
    j["n_pairs"] = pairing.pairs.size();
    j["n_boundary_nodes"] = mesh.boundary_nodes().size();
    return j;
}

Json solution_to_json(const FieldSolution& sol, bool include_fields) {
    Json j;
    j["dim"] = dim_value(sol.dim);
    j["macro_strain_voigt"] = vector_to_json(strain_to_voigt(sol.dim, sol.macro_strain));
    j["gamma"] = sol.gammas;
    j["volume"] = sol.volume;
    j["box_volume"] = sol.box_volume;
    j["average_strain_voigt"] = vector_to_json(strain_to_voigt(sol.dim, sol.average_strain()));
    j["average_stress_voigt"] = vector_to_json(stress_to_voigt(sol.dim, sol.average_stress()));
    j["diagnostics"] = Json{{"constraint_residual", sol.constraint_residual},
                            {"rotation_norm", sol.rotation_norm},
                            {"fluctuation_max", sol.fluctuation_max},
                            {"solver_residual", sol.solver_residual}};
    if (include_fields) {
        j["u"] = vector_to_json(sol.u);
    }
    return j;
}

Json stiffness_to_json(const HomogenizedStiffness& h, Dim dim) {
    Json j;
    j["C_eff"] = matrix_to_json(h.C);
    j["asymmetry"] = h.asymmetry;
    j["voigt_order"] = voigt_labels(dim);
    j["case_of_column"] = h.case_of_column;
    j["complete"] = h.complete();
    return j;
}

Json equivalence_report_to_json(const EquivalenceReport& report) {
    Json j;
    j["max_strain_residual"] = report.max_strain_residual;
    j["max_stress_residual"] = report.max_stress_residual;
    j["worst_location"] = vector_to_json(report.worst_location);
    j["compared"] = report.compared;
    j["missing"] = report.missing;
    j["placements"] = report.placements;
    return j;
}

std::string gauss_csv(const FieldSolution& sol) {
    std::ostringstream os;
    const int d = dim_value(sol.dim);
    const auto labels = voigt_labels(sol.dim);
    os << "element";
    for (int a = 0; a < d; ++a) os << ",x" << a + 1;
    os << ",weight";
    for (const auto& l : labels) os << ",eps" << l;
    for (const auto& l : labels) os << ",sig" << l;
    os << "\n";
    char buf[64];
    for (const auto& g : sol.gauss) {
        os << g.element;
        for (int a = 0; a < d; ++a) {
            std::snprintf(buf, sizeof(buf), "%.15g", g.position[a]);
            os << "," << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.15g", g.weight);
        os << "," << buf;
        for (int i = 0; i < g.strain.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.15g", g.strain[i]);
            os << "," << buf;
        }
        for (int i = 0; i < g.stress.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.15g", g.stress[i]);
            os << "," << buf;
        }
        os << "\n";
    }
    return os.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IOError", path, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IOError", path, "cannot write " + path);
    out << payload;
}

Json read_json_file(const std::string& path) {
    return Json::parse(read_text_file(path));
}

void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace ruc
