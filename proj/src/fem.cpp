#include "ruc/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <Eigen/SVD>
#include <Eigen/SparseCholesky>

#include "ruc/elements.hpp"

namespace ruc {

Matrix element_stiffness(Dim dim, const Matrix& coords, const Matrix& C) {
    const int nd = static_cast<int>(coords.rows()) * dim_value(dim);
    Matrix K = Matrix::Zero(nd, nd);
    for (const auto& gp : gauss_rule(dim)) {
        const ElementGeometry geo = element_geometry(dim, coords, gp.xi);
        if (geo.det <= 0.0)
            throw Error("InvertedElement", "element", "non-positive Jacobian during assembly");
        const Matrix B = strain_displacement(dim, geo.grad_x);
        K.noalias() += B.transpose() * C * B * (geo.det * gp.weight);
    }
    return K;
}

namespace {

Matrix stiffness_for_tag(const MaterialSet& materials, int tag, Dim dim, PlaneKind plane) {
    auto it = materials.find(tag);
    if (it == materials.end())
        throw Error("UnknownMaterial", "tag " + std::to_string(tag),
                    "no material for tag " + std::to_string(tag));
    return material_stiffness(it->second, dim, plane);
}

}  // namespace

SparseMatrix assemble(const Mesh& mesh, const MaterialSet& materials, PlaneKind plane,
                      int threads) {
    const Dim dim = mesh.dim();
    const int d = dim_value(dim);
    const int npe = mesh.nodes_per_element();
    const int n_dof = mesh.n_nodes() * d;

    std::map<int, Matrix> C_by_tag;
    for (int e = 0; e < mesh.n_elements(); ++e)
        if (!C_by_tag.count(mesh.material_tag(e)))
            C_by_tag[mesh.material_tag(e)] =
                stiffness_for_tag(materials, mesh.material_tag(e), dim, plane);

    using Triplet = Eigen::Triplet<double>;
    const int n_threads = std::max(1, std::min(threads, mesh.n_elements()));
    std::vector<std::vector<Triplet>> chunks(n_threads);

    auto work = [&](int t) {
        const int lo = mesh.n_elements() * t / n_threads;
        const int hi = mesh.n_elements() * (t + 1) / n_threads;
        auto& triplets = chunks[t];
        triplets.reserve(static_cast<size_t>(hi - lo) * npe * npe * d * d);
        Matrix coords(npe, d);
        for (int e = lo; e < hi; ++e) {
            const auto& conn = mesh.element(e);
            for (int a = 0; a < npe; ++a) coords.row(a) = mesh.node(conn[a]).transpose();
            Matrix Ke;
            try {
                Ke = element_stiffness(dim, coords, C_by_tag.at(mesh.material_tag(e)));
            } catch (const Error& err) {
                throw Error(err.code(), "element " + std::to_string(e),
                            "element " + std::to_string(e) + ": " + err.what());
            }
            for (int a = 0; a < npe; ++a)
                for (int i = 0; i < d; ++i)
                    for (int b = 0; b < npe; ++b)
                        for (int j = 0; j < d; ++j)
                            triplets.emplace_back(conn[a] * d + i, conn[b] * d + j,
                                                  Ke(a * d + i, b * d + j));
        }
    };

    if (n_threads == 1) {
        work(0);
    } else {
        std::vector<std::exception_ptr> errors(n_threads);
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    work(t);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    // concatenate in element order: the summation order, and therefore the
    // result, is independent of the thread count
    std::vector<Triplet> all;
    size_t total = 0;
    for (const auto& c : chunks) total += c.size();
    all.reserve(total);
    for (const auto& c : chunks) all.insert(all.end(), c.begin(), c.end());

    SparseMatrix K(n_dof, n_dof);
    K.setFromTriplets(all.begin(), all.end());
    return K;
}

Matrix FieldSolution::average_strain() const {
    Vector acc = Vector::Zero(voigt_size(dim));
    for (const auto& g : gauss) acc += g.weight * g.strain;
    return voigt_to_strain(dim, Vector(acc / box_volume));
}

Matrix FieldSolution::average_stress() const {
    Vector acc = Vector::Zero(voigt_size(dim));
    for (const auto& g : gauss) acc += g.weight * g.stress;
    return voigt_to_stress(dim, Vector(acc / box_volume));
}

std::vector<std::pair<Matrix, int>> relation_group(const CellSpec& spec,
                                                   const std::vector<int>& gammas) {
    const int d = dim_value(spec.dim);
    auto key = [&](const Matrix& S, int g) {
        std::ostringstream os;
        os << g;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) os << "," << std::llround(S(i, j) * 1e9);
        return os.str();
    };
    std::vector<std::pair<Matrix, int>> group{{Matrix::Identity(d, d), 1}};
    std::map<std::string, int> seen{{key(group[0].first, 1), 1}};
    size_t cursor = 0;
    while (cursor < group.size()) {
        const auto [S, g] = group[cursor++];
        for (int r = 0; r < spec.n(); ++r) {
            const Matrix& T = spec.relations[r].T.matrix();
            for (const Matrix& gen : {T, Matrix(T.transpose())}) {
                const Matrix Sn = gen * S;
                const int gn = gammas[r] * g;
                const std::string k = key(Sn, gn);
                if (seen.count(k)) continue;
                seen[k] = 1;
                group.emplace_back(Sn, gn);
                if (group.size() > 512)
                    throw Error("EnumerationBound", "relation group",
                                "relation group does not close within 512 elements");
            }
        }
    }
    return group;
}

Matrix symmetrize_over_group(const std::vector<std::pair<Matrix, int>>& group, const Matrix& m) {
    Matrix acc = Matrix::Zero(m.rows(), m.cols());
    for (const auto& [S, g] : group) acc += g * (S * m * S.transpose());
    return acc / static_cast<double>(group.size());
}

namespace {

struct NodeExpr {
    int base = -1;   // canonical master (or the node itself)
    Matrix A;        // u_node = A u_base + a
    Vector a;
};

}  // namespace

Reduction build_reduction(const Mesh& mesh, const std::vector<ConstraintEquation>& equations,
                          const MacroStrain& eps) {
    const Dim dim = mesh.dim();
    const int d = dim_value(dim);
    const int n = mesh.n_nodes();

    // slave -> eliminating equation
    std::vector<int> slave_eq(n, -1);
    for (size_t i = 0; i < equations.size(); ++i) {
        const auto& eq = equations[i];
        if (eq.kind != ConstraintEquation::Kind::eliminating) continue;
        if (slave_eq[eq.slave] != -1)
            throw Error("InvalidConstraints", "node " + std::to_string(eq.slave),
                        "node appears as slave in more than one eliminating constraint");
        slave_eq[eq.slave] = static_cast<int>(i);
    }
    for (size_t i = 0; i < equations.size(); ++i) {
        const auto& eq = equations[i];
        if (eq.kind == ConstraintEquation::Kind::eliminating && slave_eq[eq.master] != -1)
            throw Error("InvalidConstraints", "node " + std::to_string(eq.master),
                        "master of an eliminating constraint is itself a slave");
    }

    auto node_expr = [&](int node) {
        NodeExpr ex;
        if (slave_eq[node] >= 0) {
            const auto& eq = equations[slave_eq[node]];
            ex.base = eq.master;
            ex.A = eq.coeff;
            ex.a = eq.rhs;
        } else {
            ex.base = node;
            ex.A = Matrix::Identity(d, d);
            ex.a = Vector::Zero(d);
        }
        return ex;
    };

    // stacked degenerate constraints per base node
    std::map<int, std::vector<std::pair<Matrix, Vector>>> stacked;
    for (const auto& eq : equations) {
        if (eq.kind == ConstraintEquation::Kind::eliminating) continue;
        if (eq.kind == ConstraintEquation::Kind::self) {
            const NodeExpr ex = node_expr(eq.slave);
            const Matrix P = (Matrix::Identity(d, d) - eq.coeff) * ex.A;
            const Vector q = eq.rhs - (Matrix::Identity(d, d) - eq.coeff) * ex.a;
            stacked[ex.base].emplace_back(P, q);
        } else {  // redundant cycle constraint
            const NodeExpr es = node_expr(eq.slave);
            const NodeExpr em = node_expr(eq.master);
            if (es.base != em.base)
                throw Error("InvalidConstraints", "node " + std::to_string(eq.slave),
                            "cycle constraint spans two equivalence classes");
            const Matrix P = es.A - eq.coeff * em.A;
            const Vector q = eq.rhs + eq.coeff * em.a - es.a;
            stacked[es.base].emplace_back(P, q);
        }
    }

    // rigid translations not suppressed by the constraint set are pinned at
    // the node nearest the frame origin, to the affine value <eps> x
    const double dir_tol = 1e-9;
    for (int j = 0; j < d; ++j) {
        bool free_dir = true;
        for (const auto& eq : equations) {
            const Vector v = Vector::Unit(d, j) - eq.coeff.col(j);
            if (v.norm() > dir_tol) {
                free_dir = false;
                break;
            }
        }
        if (!free_dir) continue;
        int anchor = -1;
        double best = std::numeric_limits<double>::max();
        for (int i = 0; i < n; ++i) {
            if (slave_eq[i] >= 0) continue;  // pin where the DOF is explicit
            const double dist = mesh.node(i).norm();
            if (dist < best) {
                best = dist;
                anchor = i;
            }
        }
        if (anchor < 0)
            throw Error("SingularSystem", "anchor", "no free node available for pinning");
        Matrix P = Matrix::Zero(1, d);
        P(0, j) = 1.0;
        Vector q(1);
        q[0] = (eps.tensor * mesh.node(anchor))[j];
        stacked[anchor].emplace_back(P, q);
    }

    // reduced DOF layout
    const double scale = std::max({1.0, eps.tensor.cwiseAbs().maxCoeff() * mesh.diagonal()});
    std::vector<int> offset(n, -1);
    std::vector<Matrix> null_basis(n);
    std::vector<Vector> particular(n);
    int n_red = 0;
    for (int i = 0; i < n; ++i) {
        if (slave_eq[i] >= 0) continue;
        auto it = stacked.find(i);
        if (it == stacked.end()) {
            offset[i] = n_red;
            null_basis[i] = Matrix::Identity(d, d);
            particular[i] = Vector::Zero(d);
            n_red += d;
            continue;
        }
        int rows = 0;
        for (const auto& [P, q] : it->second) rows += static_cast<int>(P.rows());
        Matrix P(rows, d);
        Vector q(rows);
        int r = 0;
        for (const auto& [Pi, qi] : it->second) {
            P.middleRows(r, Pi.rows()) = Pi;
            q.segment(r, qi.size()) = qi;
            r += static_cast<int>(Pi.rows());
        }
        Eigen::JacobiSVD<Matrix> svd(P, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-10);
        const Vector up = svd.solve(q);
        if ((P * up - q).norm() > 1e-8 * scale)
            throw Error("InconsistentConstraints", "node " + std::to_string(i),
                        "degenerate constraints at node " + std::to_string(i) +
                            " have no solution (residual " + std::to_string((P * up - q).norm()) +
                            ")");
        const auto& sv = svd.singularValues();
        const double cutoff = sv.size() ? 1e-10 * std::max(sv.maxCoeff(), 1.0) : 0.0;
        int rank = 0;
        for (int k = 0; k < sv.size(); ++k)
            if (sv[k] > cutoff) ++rank;
        const int null_dim = d - rank;
        offset[i] = n_red;
        null_basis[i] = svd.matrixV().rightCols(null_dim);
        particular[i] = up;
        n_red += null_dim;
    }

    Reduction red;
    red.n_reduced = n_red;
    red.c = Vector::Zero(n * d);
    std::vector<Eigen::Triplet<double>> triplets;
    for (int i = 0; i < n; ++i) {
        if (slave_eq[i] >= 0) continue;
        for (int r = 0; r < d; ++r) {
            red.c[i * d + r] = particular[i][r];
            for (int k = 0; k < null_basis[i].cols(); ++k)
                if (null_basis[i](r, k) != 0.0)
                    triplets.emplace_back(i * d + r, offset[i] + k, null_basis[i](r, k));
        }
    }
    for (int i = 0; i < n; ++i) {
        if (slave_eq[i] < 0) continue;
        const auto& eq = equations[slave_eq[i]];
        const int m = eq.master;
        const Matrix AN = eq.coeff * null_basis[m];
        const Vector ac = eq.coeff * particular[m] + eq.rhs;
        for (int r = 0; r < d; ++r) {
            red.c[i * d + r] = ac[r];
            for (int k = 0; k < AN.cols(); ++k)
                if (AN(r, k) != 0.0) triplets.emplace_back(i * d + r, offset[m] + k, AN(r, k));
        }
    }
    red.R.resize(n * d, n_red);
    red.R.setFromTriplets(triplets.begin(), triplets.end());
    return red;
}

namespace {

FieldSolution recover_fields(const Mesh& mesh, const MaterialSet& materials, PlaneKind plane,
                             const Vector& u, const MacroStrain& eps, double box_volume) {
    const Dim dim = mesh.dim();
    const int d = dim_value(dim);
    const int npe = mesh.nodes_per_element();
    FieldSolution sol;
    sol.dim = dim;
    sol.u = u;
    sol.macro_strain = eps.tensor;
    sol.box_volume = box_volume;

    std::map<int, Matrix> C_by_tag;
    const auto rule = gauss_rule(dim);
    Matrix coords(npe, d);
    Vector ue(npe * d);
    Matrix rot_acc = Matrix::Zero(d, d);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const auto& conn = mesh.element(e);
        const int tag = mesh.material_tag(e);
        if (!C_by_tag.count(tag)) C_by_tag[tag] = stiffness_for_tag(materials, tag, dim, plane);
        const Matrix& C = C_by_tag[tag];
        for (int a = 0; a < npe; ++a) {
            coords.row(a) = mesh.node(conn[a]).transpose();
            ue.segment(a * d, d) = u.segment(conn[a] * d, d);
        }
        for (const auto& gp : rule) {
            const ElementGeometry geo = element_geometry(dim, coords, gp.xi);
            const Matrix B = strain_displacement(dim, geo.grad_x);
            GaussSample s;
            s.element = e;
            const Vector shape = shape_values(dim, gp.xi);
            s.position = coords.transpose() * shape;
            s.weight = geo.det * gp.weight;
            s.strain = B * ue;
            s.stress = C * s.strain;
            // displacement gradient for the rotation average
            Matrix grad_u = Matrix::Zero(d, d);
            for (int a = 0; a < npe; ++a)
                grad_u += u.segment(conn[a] * d, d) * geo.grad_x.row(a);
            rot_acc += 0.5 * (grad_u - grad_u.transpose()) * s.weight;
            sol.volume += s.weight;
            sol.gauss.push_back(std::move(s));
        }
    }
    sol.rotation_norm = (rot_acc / sol.box_volume).cwiseAbs().maxCoeff();

    double fluct = 0.0;
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const Vector ustar = u.segment(i * d, d) - eps.tensor * mesh.node(i);
        fluct = std::max(fluct, ustar.cwiseAbs().maxCoeff());
    }
    sol.fluctuation_max = fluct;
    return sol;
}

double constraint_violation(const std::vector<ConstraintEquation>& equations, const Vector& u,
                            int d, double scale) {
    double worst = 0.0;
    for (const auto& eq : equations) {
        const Vector us = u.segment(eq.slave * d, d);
        const Vector um = u.segment(eq.master * d, d);
        Vector r;
        if (eq.kind == ConstraintEquation::Kind::self) {
            r = us - eq.coeff * us - eq.rhs;
        } else {
            r = us - eq.coeff * um - eq.rhs;
        }
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    return worst / scale;
}

FieldSolution solve_constrained(const Mesh& mesh, const CellSpec& spec,
                                const MaterialSet& materials, const std::vector<int>& gammas,
                                const MacroStrain& eps, PlaneKind plane, int threads) {
    const int d = dim_value(mesh.dim());
    const auto mesh_report = mesh.validate(&spec);
    if (!mesh_report.ok())
        throw Error("InvalidMesh", mesh_report.errors().front()->entity,
                    mesh_report.errors().front()->message);

    const PairingGraph graph = pair_boundary_nodes(mesh, spec);
    const ResolvedPairing resolved = resolve(graph, mesh, spec);
    const auto equations = build_constraints_with_gammas(resolved, spec, gammas, eps);

    const Reduction red = build_reduction(mesh, equations, eps);
    const SparseMatrix K = assemble(mesh, materials, plane, threads);
    const SparseMatrix Kr = (red.R.transpose() * K * red.R).pruned(1e-300);
    const Vector f = -red.R.transpose() * (K * red.c);

    Eigen::SimplicialLDLT<SparseMatrix> solver;
    solver.compute(Kr);
    if (solver.info() != Eigen::Success)
        throw Error("SingularSystem", "reduced system",
                    "factorization of the reduced system failed");
    const Vector D = solver.vectorD();
    const double dmax = D.cwiseAbs().maxCoeff();
    int nullity = 0;
    for (int i = 0; i < D.size(); ++i)
        if (std::abs(D[i]) < 1e-10 * dmax) ++nullity;
    if (nullity > 0)
        throw Error("SingularSystem", "reduced system",
                    "singular reduced system, estimated nullspace dimension " +
                        std::to_string(nullity) +
                        " (constraints leave zero-energy modes; the load may not be "
                        "realizable on this cell)");
    const Vector z = solver.solve(f);
    if (!z.allFinite())
        throw Error("SingularSystem", "reduced system", "solve produced non-finite values");
    const Vector u = red.R * z + red.c;

    double box_volume = 1.0;
    for (const auto& b : spec.bbox) box_volume *= b.extent();
    FieldSolution sol = recover_fields(mesh, materials, plane, u, eps, box_volume);
    sol.gammas = gammas;
    const double scale =
        std::max({1.0e-300, u.cwiseAbs().maxCoeff(),
                  eps.tensor.cwiseAbs().maxCoeff() * mesh.diagonal()});
    sol.constraint_residual = constraint_violation(equations, u, d, scale);
    const double fnorm = f.norm();
    sol.solver_residual = fnorm > 0 ? (Kr * z - f).norm() / fnorm : (Kr * z).norm();
    return sol;
}

}  // namespace

FieldSolution solve_with_gammas(const Mesh& mesh, const CellSpec& spec,
                                const MaterialSet& materials, const std::vector<int>& gammas,
                                const MacroStrain& eps, PlaneKind plane, int threads) {
    return solve_constrained(mesh, spec, materials, gammas, eps, plane, threads);
}

FieldSolution solve_ruc(const Mesh& mesh, const CellSpec& spec, const MaterialSet& materials,
                        const MacroStrain& eps, PlaneKind plane, int threads) {
    const GammaAssignment assignment = check_admissibility(spec, eps);
    if (!assignment.admissible)
        throw Error("InadmissibleLoad", assignment.worst_relation,
                    "macro strain is inadmissible for this cell: relation " +
                        assignment.worst_relation + " fails with residual " +
                        std::to_string(assignment.worst_residual));
    return solve_constrained(mesh, spec, materials, assignment.gammas, eps, plane, threads);
}

bool HomogenizedStiffness::complete() const {
    return std::all_of(case_of_column.begin(), case_of_column.end(),
                       [](int c) { return c >= 0; });
}

HomogenizedStiffness homogenize(const Mesh& mesh, const CellSpec& spec,
                                const MaterialSet& materials, PlaneKind plane, int threads) {
    const Dim dim = spec.dim;
    const int vs = voigt_size(dim);
    HomogenizedStiffness out;
    out.cases = enumerate_load_cases(spec);
    out.case_of_column.assign(vs, -1);
    Matrix C = Matrix::Zero(vs, vs);

    for (int j = 0; j < vs; ++j) {
        const Vector ej = Vector::Unit(vs, j);
        for (size_t k = 0; k < out.cases.size(); ++k) {
            if (out.cases[k].contains(ej, 1e-9)) {
                out.case_of_column[j] = static_cast<int>(k);
                break;
            }
        }
        if (out.case_of_column[j] < 0) continue;
        const auto& lc = out.cases[out.case_of_column[j]];
        const MacroStrain eps = MacroStrain::from_voigt(dim, ej);
        const FieldSolution sol =
            solve_with_gammas(mesh, spec, materials, lc.gammas, eps, plane, threads);
        // sub-domain average -> macroscopic stress: project onto the
        // admissible pattern (the full-cell average of the copies)
        const auto group = relation_group(spec, lc.gammas);
        C.col(j) = stress_to_voigt(dim, symmetrize_over_group(group, sol.average_stress()));
    }

    const double cmax = C.cwiseAbs().maxCoeff();
    out.asymmetry = cmax > 0 ? (C - C.transpose()).cwiseAbs().maxCoeff() / cmax : 0.0;
    out.C = 0.5 * (C + C.transpose());
    // masked rows/columns stay as computed one-sided values
    return out;
}

int TilePlacement::gamma(const std::vector<int>& gammas) const {
    int g = 1;
    for (int r : chain) g *= gammas[r];
    return g;
}

namespace {

// Wrap a point into the primary cell of the lattice spanned by `basis`
// (columns), relative to `center`.
Vector lattice_wrap(const Vector& x, const Matrix& basis, const Vector& center) {
    if (basis.cols() == 0) return x;
    if (basis.cols() == basis.rows()) {
        const Vector frac = basis.fullPivLu().solve(x - center);
        Vector rounded(frac.size());
        for (int i = 0; i < frac.size(); ++i) rounded[i] = std::round(frac[i]);
        return x - basis * rounded;
    }
    // fewer lattice vectors than dimensions: wrap in the lattice span only
    const Matrix pinv = (basis.transpose() * basis).ldlt().solve(basis.transpose()).eval();
    const Vector frac = pinv * (x - center);
    Vector rounded(frac.size());
    for (int i = 0; i < frac.size(); ++i) rounded[i] = std::round(frac[i]);
    return x - basis * rounded;
}

}  // namespace

std::vector<TilePlacement> enumerate_tiling(const CellSpec& ruc_spec, const CellSpec& uc_spec) {
    const int d = dim_value(ruc_spec.dim);
    const double tol = 1e-6 * uc_spec.bbox_diagonal();

    Matrix lattice(d, static_cast<int>(uc_spec.periodicity.size()));
    for (size_t k = 0; k < uc_spec.periodicity.size(); ++k)
        lattice.col(static_cast<int>(k)) = uc_spec.periodicity[k];
    const Vector uc_center = uc_spec.bbox_center();
    const Vector ruc_center = ruc_spec.bbox_center();

    // signature of a placement modulo the lattice: linear part plus wrapped
    // image of the reduced-cell center
    auto signature = [&](const IsometryMap& m) {
        std::ostringstream os;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) os << std::llround(m.T.matrix()(i, j) * 1e6) << ",";
        const Vector img = lattice_wrap(m.apply(ruc_center), lattice, uc_center);
        for (int i = 0; i < d; ++i) os << std::llround(img[i] / tol) << ",";
        return os.str();
    };

    std::vector<TilePlacement> out;
    std::map<std::string, int> seen;

    std::vector<TilePlacement> frontier;
    TilePlacement id;
    id.map = IsometryMap::identity(ruc_spec.dim);
    seen[signature(id.map)] = 1;
    out.push_back(id);
    frontier.push_back(id);

    const int max_placements = 4096;
    while (!frontier.empty() && static_cast<int>(out.size()) < max_placements) {
        std::vector<TilePlacement> next;
        for (const auto& p : frontier) {
            for (int r = 0; r < ruc_spec.n(); ++r) {
                const auto& rel = ruc_spec.relations[r];
                const IsometryMap fwd{rel.T, rel.offset};
                for (const IsometryMap& gen : {fwd.inverse(), fwd}) {
                    TilePlacement np;
                    np.map = IsometryMap::compose(gen, p.map);
                    const std::string key = signature(np.map);
                    if (seen.count(key)) continue;
                    seen[key] = 1;
                    np.chain = p.chain;
                    np.chain.push_back(r);
                    out.push_back(np);
                    next.push_back(np);
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

EquivalenceReport verify_equivalence(const FieldSolution& uc, const FieldSolution& ruc,
                                     const CellSpec& ruc_spec, const CellSpec& uc_spec,
                                     const std::vector<int>& gammas) {
    const Dim dim = ruc_spec.dim;
    const int d = dim_value(dim);
    const double match_tol = 1e-6 * uc_spec.bbox_diagonal();

    Matrix lattice(d, static_cast<int>(uc_spec.periodicity.size()));
    for (size_t k = 0; k < uc_spec.periodicity.size(); ++k)
        lattice.col(static_cast<int>(k)) = uc_spec.periodicity[k];
    const Vector uc_center = uc_spec.bbox_center();

    // hash of full-cell gauss positions
    std::map<std::array<long long, 3>, std::vector<int>> buckets;
    auto key_of = [&](const Vector& x) {
        std::array<long long, 3> k{0, 0, 0};
        for (int i = 0; i < d; ++i)
            k[i] = static_cast<long long>(std::floor(x[i] / (match_tol * 8)));
        return k;
    };
    for (size_t i = 0; i < uc.gauss.size(); ++i)
        buckets[key_of(uc.gauss[i].position)].push_back(static_cast<int>(i));
    auto find_uc = [&](const Vector& x) -> int {
        const auto k = key_of(x);
        const int zr = d == 3 ? 1 : 0;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -zr; dz <= zr; ++dz) {
                    auto it = buckets.find({k[0] + dx, k[1] + dy, k[2] + dz});
                    if (it == buckets.end()) continue;
                    for (int idx : it->second)
                        if ((uc.gauss[idx].position - x).norm() <= match_tol) return idx;
                }
        return -1;
    };

    double strain_scale = 1e-300;
    double stress_scale = 1e-300;
    for (const auto& g : uc.gauss) {
        strain_scale = std::max(strain_scale, g.strain.cwiseAbs().maxCoeff());
        stress_scale = std::max(stress_scale, g.stress.cwiseAbs().maxCoeff());
    }

    const auto placements = enumerate_tiling(ruc_spec, uc_spec);
    EquivalenceReport report;
    report.placements = static_cast<int>(placements.size());
    report.worst_location = Vector::Zero(d);

    for (const auto& placement : placements) {
        const Matrix S = placement.map.T.matrix();
        const int g = placement.gamma(gammas);
        int hits = 0;
        for (const auto& sample : ruc.gauss) {
            const Vector y =
                lattice_wrap(placement.map.apply(sample.position), lattice, uc_center);
            const int idx = find_uc(y);
            if (idx < 0) continue;
            ++hits;
            const Matrix eps_r = voigt_to_strain(dim, sample.strain);
            const Matrix sig_r = voigt_to_stress(dim, sample.stress);
            const Matrix eps_mapped = g * (S * eps_r * S.transpose());
            const Matrix sig_mapped = g * (S * sig_r * S.transpose());
            const Matrix eps_uc = voigt_to_strain(dim, uc.gauss[idx].strain);
            const Matrix sig_uc = voigt_to_stress(dim, uc.gauss[idx].stress);
            const double rs = max_abs_diff(eps_uc, eps_mapped) / strain_scale;
            const double rt = max_abs_diff(sig_uc, sig_mapped) / stress_scale;
            if (rs > report.max_strain_residual) {
                report.max_strain_residual = rs;
                report.worst_location = y;
            }
            report.max_stress_residual = std::max(report.max_stress_residual, rt);
            ++report.compared;
        }
        if (hits == 0 && &placement == &placements.front())
            throw Error("IncompatibleMeshes", "verify",
                        "no corresponding Gauss points found between the two meshes");
    }
    const int expected = static_cast<int>(ruc.gauss.size());
    // with a complete tiling, every reduced-cell point is visited at least
    // |UC| / |rUC| times; count points never matched under any placement
    std::vector<char> matched(ruc.gauss.size(), 0);
    for (const auto& placement : placements) {
        for (size_t i = 0; i < ruc.gauss.size(); ++i) {
            if (matched[i]) continue;
            const Vector y =
                lattice_wrap(placement.map.apply(ruc.gauss[i].position), lattice, uc_center);
            if (find_uc(y) >= 0) matched[i] = 1;
        }
    }
    report.missing = expected - static_cast<int>(std::count(matched.begin(), matched.end(), 1));
    return report;
}

}  // namespace ruc
