#include <doctest.h>

#include <random>

#include "ruc/elements.hpp"
#include "ruc/fem.hpp"
#include "ruc/fixtures.hpp"

using namespace ruc;

namespace {

Matrix sym2(double e11, double e22, double e12) {
    Matrix m(2, 2);
    m << e11, e12, e12, e22;
    return m;
}

// Independent Q4 stiffness oracle: its own shape-function derivatives and a
// high-order Gauss-Legendre rule, sharing no code with the implementation.
Matrix oracle_q4_stiffness(const Matrix& coords, const Matrix& D) {
    // 10-point Gauss-Legendre on [-1,1]
    const double gp[10] = {-0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
                           -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
                           0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
                           0.9739065285171717};
    const double gw[10] = {0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
                           0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
                           0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                           0.0666713443086881};
    Matrix K = Matrix::Zero(8, 8);
    for (int a = 0; a < 10; ++a) {
        for (int b = 0; b < 10; ++b) {
            const double xi = gp[a], eta = gp[b];
            // dN/dxi, dN/deta for the bilinear quad, typed out directly
            const double dNdxi[4] = {-(1 - eta) / 4, (1 - eta) / 4, (1 + eta) / 4,
                                     -(1 + eta) / 4};
            const double dNdeta[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
            double J11 = 0, J12 = 0, J21 = 0, J22 = 0;
            for (int n = 0; n < 4; ++n) {
                J11 += dNdxi[n] * coords(n, 0);
                J12 += dNdxi[n] * coords(n, 1);
                J21 += dNdeta[n] * coords(n, 0);
                J22 += dNdeta[n] * coords(n, 1);
            }
            const double det = J11 * J22 - J12 * J21;
            Matrix B = Matrix::Zero(3, 8);
            for (int n = 0; n < 4; ++n) {
                const double dNdx = (J22 * dNdxi[n] - J12 * dNdeta[n]) / det;
                const double dNdy = (-J21 * dNdxi[n] + J11 * dNdeta[n]) / det;
                B(0, 2 * n) = dNdx;
                B(1, 2 * n + 1) = dNdy;
                B(2, 2 * n) = dNdy;
                B(2, 2 * n + 1) = dNdx;
            }
            K += B.transpose() * D * B * det * gw[a] * gw[b];
        }
    }
    return K;
}

}  // namespace

TEST_CASE("Q4 element stiffness matches the independent oracle") {
    Matrix coords(4, 2);
    coords << 0, 0, 1, 0, 1, 1, 0, 1;  // unit square
    Material m;
    m.E = 1.0;
    m.nu = 0.0;
    const Matrix D = material_stiffness(m, Dim::two, PlaneKind::stress);
    const Matrix K = element_stiffness(Dim::two, coords, D);
    const Matrix K_oracle = oracle_q4_stiffness(coords, D);
    CHECK(max_abs_diff(K, K_oracle) <= 1e-12);
    // frozen spot value for the unit square with E=1, nu=0: K00 = 1/2
    CHECK(K(0, 0) == doctest::Approx(0.5).epsilon(1e-12));

    // a sheared parallelogram with a nontrivial material: the mapping is
    // affine, so the 2x2 rule is still exact and must match the oracle
    Matrix skew(4, 2);
    skew << 0, 0, 1.3, 0.1, 1.5, 1.2, 0.2, 1.1;
    Material m2;
    m2.E = 7.0;
    m2.nu = 0.27;
    const Matrix D2 = material_stiffness(m2, Dim::two, PlaneKind::strain);
    CHECK(max_abs_diff(element_stiffness(Dim::two, skew, D2), oracle_q4_stiffness(skew, D2)) <=
          1e-11);
}

TEST_CASE("rigid translations lie in the element nullspace") {
    std::mt19937 rng(3);
    for (int d : {2, 3}) {
        const Dim dim = d == 2 ? Dim::two : Dim::three;
        const int npe = d == 2 ? 4 : 8;
        Matrix coords = d == 2 ? (Matrix(4, 2) << 0, 0, 2, 0.1, 2.2, 1.4, -0.1, 1.2).finished()
                               : (Matrix(8, 3) << 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 1, 1,
                                  0, 1, 1, 1, 1, 0, 1, 1)
                                     .finished();
        Material m;
        m.E = 3.0;
        m.nu = 0.25;
        const Matrix K =
            element_stiffness(dim, coords, material_stiffness(m, dim, PlaneKind::strain));
        for (int j = 0; j < d; ++j) {
            Vector translation = Vector::Zero(npe * d);
            for (int n = 0; n < npe; ++n) translation[n * d + j] = 1.0;
            CHECK((K * translation).cwiseAbs().maxCoeff() <= 1e-12 * K.cwiseAbs().maxCoeff());
        }
        (void)rng;
    }
}

TEST_CASE("assembly is the sum of scattered element matrices") {
    // two identical unit squares sharing a face
    const Mesh mesh =
        structured_mesh(Dim::two, {{0, 2}, {0, 1}}, {2, 1}, [](const Vector&) { return 1; });
    Material m;
    m.E = 2.0;
    m.nu = 0.3;
    const MaterialSet mats{{1, m}};
    const SparseMatrix K = assemble(mesh, mats, PlaneKind::strain);
    const Matrix D = material_stiffness(m, Dim::two, PlaneKind::strain);
    Matrix dense = Matrix::Zero(mesh.n_nodes() * 2, mesh.n_nodes() * 2);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        Matrix coords(4, 2);
        for (int a = 0; a < 4; ++a) coords.row(a) = mesh.node(mesh.element(e)[a]).transpose();
        const Matrix Ke = element_stiffness(Dim::two, coords, D);
        for (int a = 0; a < 4; ++a)
            for (int i = 0; i < 2; ++i)
                for (int b = 0; b < 4; ++b)
                    for (int j = 0; j < 2; ++j)
                        dense(mesh.element(e)[a] * 2 + i, mesh.element(e)[b] * 2 + j) +=
                            Ke(a * 2 + i, b * 2 + j);
    }
    CHECK(max_abs_diff(Matrix(K), dense) <= 1e-13);
}

TEST_CASE("assembly is bit-stable across thread counts") {
    const Mesh mesh = fixtures::checkerboard_uc_mesh();
    const auto mats = fixtures::checkerboard_materials();
    const Matrix K1 = Matrix(assemble(mesh, mats, PlaneKind::strain, 1));
    const Matrix K2 = Matrix(assemble(mesh, mats, PlaneKind::strain, 2));
    const Matrix K3 = Matrix(assemble(mesh, mats, PlaneKind::strain, 3));
    CHECK(max_abs_diff(K1, K2) == 0.0);
    CHECK(max_abs_diff(K1, K3) == 0.0);
}

TEST_CASE("inverted elements are reported") {
    std::vector<Vector> nodes = {Vector(2), Vector(2), Vector(2), Vector(2)};
    nodes[0] << 0, 0;
    nodes[1] << 0, 1;  // clockwise: negative Jacobian
    nodes[2] << 1, 1;
    nodes[3] << 1, 0;
    const Mesh mesh(Dim::two, nodes, {{0, 1, 2, 3}}, {1});
    Material m;
    m.E = 1.0;
    m.nu = 0.0;
    CHECK_THROWS_AS(assemble(mesh, {{1, m}}, PlaneKind::strain), Error);
    CHECK_FALSE(mesh.validate().ok());
}

TEST_CASE("homogeneous solid cell: affine solution, uniform stress, exact recovery") {
    const auto spec = fixtures::checkerboard_ruc_spec();
    const Mesh mesh = fixtures::checkerboard_ruc_mesh();
    Material m;
    m.E = 5.0;
    m.nu = 0.3;
    const MaterialSet mats{{1, m}, {2, m}};
    const Matrix D = material_stiffness(m, Dim::two, PlaneKind::strain);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-0.01, 0.01);
    const MacroStrain eps(sym2(uni(rng), uni(rng), uni(rng)));
    const auto sol = solve_ruc(mesh, spec, mats, eps);

    const Vector sigma_expect = D * strain_to_voigt(Dim::two, eps.tensor);
    for (const auto& g : sol.gauss) {
        CHECK((g.stress - sigma_expect).cwiseAbs().maxCoeff() <=
              1e-9 * sigma_expect.cwiseAbs().maxCoeff());
    }
    CHECK(sol.fluctuation_max <= 1e-9 * eps.tensor.cwiseAbs().maxCoeff() * mesh.diagonal());
    CHECK(max_abs_diff(sol.average_strain(), eps.tensor) <=
          1e-9 * eps.tensor.cwiseAbs().maxCoeff());
    CHECK(sol.rotation_norm <= 1e-9);
    CHECK(sol.constraint_residual <= 1e-9);
}

TEST_CASE("honeycomb self-pairs pin the fixed points to the affine field") {
    const auto spec = fixtures::honeycomb_spec();
    const Mesh mesh = fixtures::honeycomb_ruc_mesh();
    const auto mats = fixtures::honeycomb_materials();
    Matrix eps = Matrix::Zero(2, 2);
    eps(0, 0) = 0.01;
    const auto sol = solve_ruc(mesh, spec, mats, MacroStrain(eps));
    // the arm cut center (w/2, 0) is a fixed point of E1 with T = -I:
    // (I - gamma T) u = 2u = rhs pins u to <eps> x exactly
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        const Vector& x = mesh.node(n);
        if (std::abs(x[0] - 0.5) < 1e-12 && std::abs(x[1]) < 1e-12) {
            const Vector expect = eps * x;
            CHECK((sol.u.segment(2 * n, 2) - expect).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    CHECK(sol.constraint_residual <= 1e-9);
}

TEST_CASE("constraint satisfaction and fluctuation relation hold after the solve") {
    const auto spec = fixtures::honeycomb_spec();
    const Mesh mesh = fixtures::honeycomb_ruc_mesh();
    const auto mats = fixtures::honeycomb_materials();
    Matrix shear = Matrix::Zero(2, 2);
    shear(0, 1) = shear(1, 0) = 0.01;
    const auto sol = solve_ruc(mesh, spec, mats, MacroStrain(shear));
    CHECK(sol.constraint_residual <= 1e-9);

    // discrete fluctuation relation u*(A) = gamma T u*(Ahat) at retained pairs
    const auto pairs = resolve(pair_boundary_nodes(mesh, spec), mesh, spec);
    const auto g = check_admissibility(spec, MacroStrain(shear));
    REQUIRE(g.admissible);
    auto fluct = [&](int n) -> Vector {
        return sol.u.segment(2 * n, 2) - shear * mesh.node(n);
    };
    double worst = 0;
    for (const auto* p : pairs.eliminating()) {
        int gamma = 1;
        for (const auto& step : p->chain) gamma *= g.gammas[step.relation];
        const Vector lhs = fluct(p->slave);
        const Vector rhs = gamma * (p->map.T.matrix() * fluct(p->master));
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-9 * std::max(1.0, sol.u.cwiseAbs().maxCoeff()));
}

TEST_CASE("homogenize on a homogeneous solid recovers the material stiffness") {
    const auto spec = fixtures::checkerboard_uc_spec();
    const Mesh mesh = fixtures::checkerboard_uc_mesh();
    Material m;
    m.E = 5.0;
    m.nu = 0.3;
    const auto h = homogenize(mesh, spec, {{1, m}, {2, m}}, PlaneKind::strain);
    REQUIRE(h.complete());
    const Matrix D = material_stiffness(m, Dim::two, PlaneKind::strain);
    CHECK(max_abs_diff(h.C, D) <= 1e-9 * D.cwiseAbs().maxCoeff());
    CHECK(h.asymmetry <= 1e-9);
}

TEST_CASE("hill-mandel equality on the checkerboard") {
    const auto spec = fixtures::checkerboard_uc_spec();
    const Mesh mesh = fixtures::checkerboard_uc_mesh();
    const auto mats = fixtures::checkerboard_materials();
    const MacroStrain eps(sym2(0.01, -0.004, 0.006));
    const auto sol = solve_ruc(mesh, spec, mats, eps);
    // (1/V) int sigma:eps dV == <sigma>:<eps> for the periodic formulation
    double energy = 0;
    for (const auto& g : sol.gauss) energy += g.weight * g.stress.dot(g.strain);
    energy /= sol.box_volume;
    const double macro = (sol.average_stress().array() * sol.average_strain().array()).sum();
    CHECK(std::abs(energy - macro) <= 1e-9 * std::max(1.0, std::abs(energy)));
}

TEST_CASE("refinement never stiffens the checkerboard in energy") {
    const auto spec = fixtures::checkerboard_uc_spec();
    const auto mats = fixtures::checkerboard_materials();
    std::vector<Matrix> C;
    for (int refine : {1, 2, 3}) {
        const Mesh mesh = fixtures::checkerboard_uc_mesh(refine);
        C.push_back(homogenize(mesh, spec, mats, PlaneKind::strain).C);
    }
    for (size_t lvl = 1; lvl < C.size(); ++lvl) {
        for (int j = 0; j < 3; ++j) {
            const Vector e = Vector::Unit(3, j);
            const double coarse = e.dot(C[lvl - 1] * e);
            const double fine = e.dot(C[lvl] * e);
            CHECK(fine <= coarse + 1e-10 * coarse);
        }
    }
}

TEST_CASE("relation group projection matches the full-cell average") {
    const auto spec = fixtures::honeycomb_spec();
    const auto cases = enumerate_load_cases(spec);
    const auto group = relation_group(spec, cases[0].gammas);
    // group of the honeycomb cell: all four sign-diagonal 2x2 matrices
    CHECK(group.size() == 4);
    Matrix m(2, 2);
    m << 3.0, 0.7, 0.7, -1.0;
    const Matrix projected = symmetrize_over_group(group, m);
    CHECK(projected(0, 0) == doctest::Approx(3.0));
    CHECK(projected(1, 1) == doctest::Approx(-1.0));
    CHECK(projected(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("singular systems are reported, not silently solved") {
    // two disconnected elements with periodic constraints on the outer
    // boundary only: the inner patch floats
    std::vector<Vector> nodes;
    auto add = [&](double x, double y) {
        Vector v(2);
        v << x, y;
        nodes.push_back(v);
    };
    // outer square split into a 2x2 grid would be connected; instead place a
    // detached element far inside
    add(0, 0);
    add(1, 0);
    add(1, 1);
    add(0, 1);  // element 0: the whole cell
    add(0.3, 0.3);
    add(0.5, 0.3);
    add(0.5, 0.5);
    add(0.3, 0.5);  // element 1: floating island
    const Mesh mesh(Dim::two, nodes, {{0, 1, 2, 3}, {4, 5, 6, 7}}, {1, 1});
    Vector d1(2), d2(2);
    d1 << 1, 0;
    d2 << 0, 1;
    const auto spec = classical_uc_spec(Dim::two, {{0, 1}, {0, 1}}, {d1, d2});
    Material m;
    m.E = 1.0;
    m.nu = 0.0;
    Matrix eps = Matrix::Zero(2, 2);
    eps(0, 0) = 0.01;
    CHECK_THROWS_AS(solve_ruc(mesh, spec, {{1, m}}, MacroStrain(eps)), Error);
}

TEST_CASE("unknown material tags are reported") {
    const Mesh mesh = fixtures::checkerboard_uc_mesh();
    Material m;
    m.E = 1.0;
    m.nu = 0.0;
    CHECK_THROWS_AS(assemble(mesh, {{1, m}}, PlaneKind::strain), Error);  // tag 2 missing
}
