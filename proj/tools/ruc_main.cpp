#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "ruc/fixtures.hpp"
#include "ruc/io.hpp"
#include "ruc/log.hpp"

namespace {

using namespace ruc;

struct Options {
    std::string spec_path;
    std::string mesh_path;
    std::string uc_spec_path;
    std::string uc_mesh_path;
    std::string load_path;
    std::string material_path;
    std::string out_path;
    std::string format = "text";
    std::string plane = "strain";
    std::string gauss_csv_path;
    double tol = -1.0;
    int threads = 1;
};

PlaneKind plane_kind(const Options& opt) {
    if (opt.plane == "stress") return PlaneKind::stress;
    if (opt.plane == "strain") return PlaneKind::strain;
    throw Error("InvalidOption", "--plane", "plane must be 'strain' or 'stress'");
}

CellSpec load_spec(const std::string& path) { return spec_from_json(read_json_file(path)); }
Mesh load_mesh(const std::string& path) { return mesh_from_json(read_json_file(path)); }
MaterialSet load_materials(const std::string& path) {
    return materials_from_json(read_json_file(path));
}

void write_report(const Options& opt, const std::string& fallback, const Json& payload) {
    const std::string path = opt.out_path.empty() ? fallback : opt.out_path;
    write_json_file(path, payload);
    log::info("wrote " + path);
}

void print_payload(const Options& opt, const Json& payload, const std::string& text) {
    if (opt.format == "json")
        std::cout << payload.dump(2) << "\n";
    else
        std::cout << text;
}

int cmd_validate(const Options& opt) {
    const CellSpec spec = load_spec(opt.spec_path);
    ValidationReport report;
    if (!opt.mesh_path.empty()) {
        const Mesh mesh = load_mesh(opt.mesh_path);
        report = validate(spec, &mesh);
        const auto mesh_report = mesh.validate(&spec);
        report.issues.insert(report.issues.end(), mesh_report.issues.begin(),
                             mesh_report.issues.end());
    } else {
        report = validate(spec);
    }
    Json payload = validation_report_to_json(report);
    // per-relation summary; improper transforms (det = -1) are worth seeing
    payload["relations"] = Json::array();
    for (const auto& rel : spec.relations) {
        payload["relations"].push_back(Json{{"label", rel.label},
                                            {"det", rel.T.det()},
                                            {"identity", rel.T.is_identity()}});
    }
    write_report(opt, "validate.json", payload);
    std::ostringstream os;
    os << report.summary() << "\n";
    for (const auto& rel : spec.relations)
        os << "  " << rel.label << ": det(T) = " << (rel.T.det() > 0 ? "+1" : "-1")
           << (rel.T.is_identity() ? " (identity)" : "") << "\n";
    print_payload(opt, payload, os.str());
    return report.ok() ? 0 : 2;
}

std::string cases_text(const CellSpec& spec, const std::vector<LoadCase>& cases) {
    std::ostringstream os;
    const auto labels = voigt_labels(spec.dim);
    for (size_t c = 0; c < cases.size(); ++c) {
        os << "case " << c + 1 << ": gamma = [";
        for (size_t i = 0; i < cases[c].gammas.size(); ++i)
            os << (i ? " " : "") << (cases[c].gammas[i] > 0 ? "+1" : "-1");
        os << "], admissible components:";
        for (int i = 0; i < cases[c].basis.rows(); ++i)
            if (cases[c].basis.row(i).cwiseAbs().maxCoeff() > 1e-9) os << " " << labels[i];
        os << " (dimension " << cases[c].dimension() << ")\n";
    }
    return os.str();
}

int cmd_cases(const Options& opt) {
    const CellSpec spec = load_spec(opt.spec_path);
    const auto cases = enumerate_load_cases(spec);
    const Json payload = load_cases_to_json(spec, cases);
    write_report(opt, "cases.json", payload);
    print_payload(opt, payload, cases_text(spec, cases));
    return 0;
}

int cmd_check(const Options& opt) {
    const CellSpec spec = load_spec(opt.spec_path);
    const MacroStrain eps = load_from_json(read_json_file(opt.load_path), spec.dim);
    const GammaAssignment g =
        check_admissibility(spec, eps, opt.tol > 0 ? opt.tol : Tol::admissibility);
    const Json payload = gamma_assignment_to_json(spec, g);
    write_report(opt, "check.json", payload);
    std::ostringstream os;
    if (g.admissible) {
        os << "admissible: gamma = [";
        for (size_t i = 0; i < g.gammas.size(); ++i)
            os << (i ? " " : "") << (g.gammas[i] > 0 ? "+1" : "-1");
        os << "]\n";
    } else {
        os << "inadmissible: relation " << g.worst_relation
           << " fails both signs, residual " << g.worst_residual << "\n";
    }
    print_payload(opt, payload, os.str());
    return g.admissible ? 0 : 2;
}

int cmd_pair(const Options& opt) {
    const CellSpec spec = load_spec(opt.spec_path);
    const Mesh mesh = load_mesh(opt.mesh_path);
    const PairingGraph graph = pair_boundary_nodes(mesh, spec, opt.tol);
    const ResolvedPairing resolved = resolve(graph, mesh, spec);
    const Json payload = pairs_to_json(spec, resolved, mesh);
    write_report(opt, "pairs.json", payload);
    std::ostringstream os;
    os << resolved.pairs.size() << " pairs over " << mesh.boundary_nodes().size()
       << " boundary nodes (" << graph.report.n_self << " self-pairs)\n";
    print_payload(opt, payload, os.str());
    return 0;
}

int cmd_constraints(const Options& opt) {
    const CellSpec spec = load_spec(opt.spec_path);
    const Mesh mesh = load_mesh(opt.mesh_path);
    const MacroStrain eps = load_from_json(read_json_file(opt.load_path), spec.dim);
    const PairingGraph graph = pair_boundary_nodes(mesh, spec, opt.tol);
    const ResolvedPairing resolved = resolve(graph, mesh, spec);
    const auto equations = build_constraints(resolved, spec, eps);

    ConstraintFormat format = ConstraintFormat::json;
    std::string ext = "json";
    if (opt.format == "csv") {
        format = ConstraintFormat::csv;
        ext = "csv";
    } else if (opt.format == "deck") {
        format = ConstraintFormat::solver_deck;
        ext = "deck";
    } else if (opt.format != "json" && opt.format != "text") {
        throw Error("InvalidOption", "--format", "constraints format must be json, csv or deck");
    }
    const std::string payload = emit(equations, spec.dim, format);
    const std::string path = opt.out_path.empty() ? ("constraints." + ext) : opt.out_path;
    write_text_file(path, payload);
    std::cout << equations.size() << " constraint equations -> " << path << "\n";
    return 0;
}

int cmd_solve(const Options& opt) {
    const CellSpec spec = load_spec(opt.spec_path);
    const Mesh mesh = load_mesh(opt.mesh_path);
    const MacroStrain eps = load_from_json(read_json_file(opt.load_path), spec.dim);
    const MaterialSet materials = load_materials(opt.material_path);
    const FieldSolution sol = solve_ruc(mesh, spec, materials, eps, plane_kind(opt), opt.threads);
    const Json payload = solution_to_json(sol, true);
    write_report(opt, "solution.json", payload);
    if (!opt.gauss_csv_path.empty()) write_text_file(opt.gauss_csv_path, gauss_csv(sol));
    std::ostringstream os;
    os << "solved " << mesh.n_elements() << " elements, volume " << sol.volume << "\n"
       << "average stress (voigt):";
    const Vector s = stress_to_voigt(sol.dim, sol.average_stress());
    for (int i = 0; i < s.size(); ++i) os << " " << s[i];
    os << "\nconstraint residual " << sol.constraint_residual << ", rotation "
       << sol.rotation_norm << "\n";
    print_payload(opt, payload, os.str());
    return 0;
}

int cmd_homogenize(const Options& opt) {
    const CellSpec spec = load_spec(opt.spec_path);
    const Mesh mesh = load_mesh(opt.mesh_path);
    const MaterialSet materials = load_materials(opt.material_path);
    const HomogenizedStiffness h = homogenize(mesh, spec, materials, plane_kind(opt), opt.threads);
    const Json payload = stiffness_to_json(h, spec.dim);
    write_report(opt, "homogenize.json", payload);
    std::ostringstream os;
    os << "C_eff (voigt";
    for (const auto& l : voigt_labels(spec.dim)) os << " " << l;
    os << "):\n";
    for (int i = 0; i < h.C.rows(); ++i) {
        for (int j = 0; j < h.C.cols(); ++j) os << (j ? " " : "  ") << h.C(i, j);
        os << "\n";
    }
    os << "asymmetry " << h.asymmetry << (h.complete() ? "" : " (partial: some columns masked)")
       << "\n";
    print_payload(opt, payload, os.str());
    return h.complete() ? 0 : 2;
}

int cmd_verify(const Options& opt) {
    const CellSpec spec = load_spec(opt.spec_path);
    const Mesh mesh = load_mesh(opt.mesh_path);
    const CellSpec uc_spec = load_spec(opt.uc_spec_path);
    const Mesh uc_mesh = load_mesh(opt.uc_mesh_path);
    const MacroStrain eps = load_from_json(read_json_file(opt.load_path), spec.dim);
    const MaterialSet materials = load_materials(opt.material_path);

    const GammaAssignment g = check_admissibility(spec, eps);
    if (!g.admissible)
        throw Error("InadmissibleLoad", g.worst_relation,
                    "load inadmissible for the reduced cell (relation " + g.worst_relation + ")");
    const FieldSolution ruc_sol =
        solve_with_gammas(mesh, spec, materials, g.gammas, eps, plane_kind(opt), opt.threads);
    const FieldSolution uc_sol =
        solve_ruc(uc_mesh, uc_spec, materials, eps, plane_kind(opt), opt.threads);
    const EquivalenceReport report = verify_equivalence(uc_sol, ruc_sol, spec, uc_spec, g.gammas);

    const Json payload = equivalence_report_to_json(report);
    write_report(opt, "verify.json", payload);
    std::ostringstream os;
    os << "compared " << report.compared << " Gauss point pairs over " << report.placements
       << " placements\nmax strain residual " << report.max_strain_residual
       << ", max stress residual " << report.max_stress_residual << "\n";
    print_payload(opt, payload, os.str());
    const double tol = opt.tol > 0 ? opt.tol : 1e-8;
    return (report.max_residual() <= tol && report.missing == 0) ? 0 : 2;
}

int cmd_fixtures(const Options& opt) {
    const std::string dir = opt.out_path.empty() ? "." : opt.out_path;
    const auto files = fixtures::write_all(dir);
    for (const auto& f : files) std::cout << f << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reduced unit cell toolkit: periodic boundary conditions from sub-domain "
                 "equivalence relations"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool needs_spec) {
        if (needs_spec) sub->add_option("--spec", opt.spec_path, "cell spec JSON")->required();
        sub->add_option("--tol", opt.tol, "tolerance override");
        sub->add_option("--format", opt.format, "output format (text|json|csv|deck)");
        sub->add_option("--out,-o", opt.out_path, "output path");
        sub->add_option("--threads", opt.threads, "assembly thread count");
        sub->add_option("--plane", opt.plane, "2D kinematics (strain|stress)");
    };

    auto* validate_cmd = app.add_subcommand("validate", "validate a cell spec");
    add_common(validate_cmd, true);
    validate_cmd->add_option("--mesh", opt.mesh_path, "mesh JSON (mesh-aware checks)");

    auto* cases_cmd = app.add_subcommand("cases", "enumerate admissible load cases");
    add_common(cases_cmd, true);

    auto* check_cmd = app.add_subcommand("check", "check load admissibility");
    add_common(check_cmd, true);
    check_cmd->add_option("--load", opt.load_path, "load JSON")->required();

    auto* pair_cmd = app.add_subcommand("pair", "pair boundary nodes");
    add_common(pair_cmd, true);
    pair_cmd->add_option("--mesh", opt.mesh_path, "mesh JSON")->required();

    auto* constraints_cmd = app.add_subcommand("constraints", "emit constraint equations");
    add_common(constraints_cmd, true);
    constraints_cmd->add_option("--mesh", opt.mesh_path, "mesh JSON")->required();
    constraints_cmd->add_option("--load", opt.load_path, "load JSON")->required();

    auto* solve_cmd = app.add_subcommand("solve", "solve the constrained cell problem");
    add_common(solve_cmd, true);
    solve_cmd->add_option("--mesh", opt.mesh_path, "mesh JSON")->required();
    solve_cmd->add_option("--load", opt.load_path, "load JSON")->required();
    solve_cmd->add_option("--material", opt.material_path, "material JSON")->required();
    solve_cmd->add_option("--gauss-csv", opt.gauss_csv_path, "write Gauss point dump CSV");

    auto* homog_cmd = app.add_subcommand("homogenize", "effective stiffness from unit strains");
    add_common(homog_cmd, true);
    homog_cmd->add_option("--mesh", opt.mesh_path, "mesh JSON")->required();
    homog_cmd->add_option("--material", opt.material_path, "material JSON")->required();

    auto* verify_cmd =
        app.add_subcommand("verify", "check reduced-cell vs full-cell field equivalence");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--mesh", opt.mesh_path, "reduced-cell mesh JSON")->required();
    verify_cmd->add_option("--uc-spec", opt.uc_spec_path, "full-cell spec JSON")->required();
    verify_cmd->add_option("--uc-mesh", opt.uc_mesh_path, "full-cell mesh JSON")->required();
    verify_cmd->add_option("--load", opt.load_path, "load JSON")->required();
    verify_cmd->add_option("--material", opt.material_path, "material JSON")->required();

    auto* fixtures_cmd = app.add_subcommand("fixtures", "write the bundled example inputs");
    add_common(fixtures_cmd, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return cmd_validate(opt);
        if (cases_cmd->parsed()) return cmd_cases(opt);
        if (check_cmd->parsed()) return cmd_check(opt);
        if (pair_cmd->parsed()) return cmd_pair(opt);
        if (constraints_cmd->parsed()) return cmd_constraints(opt);
        if (solve_cmd->parsed()) return cmd_solve(opt);
        if (homog_cmd->parsed()) return cmd_homogenize(opt);
        if (verify_cmd->parsed()) return cmd_verify(opt);
        if (fixtures_cmd->parsed()) return cmd_fixtures(opt);
    } catch (const ruc::Error& err) {
        std::cerr << "error [" << err.code() << "] " << err.entity() << ": " << err.what()
                  << "\n";
        if (err.code() == "IOError" || err.code() == "Internal") return 1;
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
