#include <doctest.h>

#include <random>

#include "ruc/equivalence.hpp"
#include "ruc/fixtures.hpp"

using namespace ruc;

namespace {

Vector v3(double a, double b, double c) {
    Vector v(3);
    v << a, b, c;
    return v;
}

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

Matrix random_orthogonal(int d, std::mt19937& rng) {
    std::normal_distribution<double> gauss;
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = gauss(rng);
    const Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ();
}

Matrix random_symmetric(int d, std::mt19937& rng) {
    std::uniform_real_distribution<double> uni(-1, 1);
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) m(i, j) = m(j, i) = uni(rng);
    return m;
}

}  // namespace

TEST_CASE("map_point matches the hand-evaluated woven relations") {
    // w=2, l=4: E1 sends (1,-1,0.5) to (w-x1, -l/2-x2, -x3)
    const auto spec = fixtures::woven3d_spec();
    const auto& e1 = spec.relation("E1");
    const Vector image = map_point(e1, v3(1, -1, 0.5));
    CHECK(image.isApprox(v3(1, -1, -0.5), 1e-14));

    // identity transform: image = x - offset
    const auto& e2 = spec.relation("E2");
    const Vector x(v3(0.3, 1.7, -0.2));
    CHECK((map_point(e2, x) - (x - e2.offset)).norm() == doctest::Approx(0.0));
}

TEST_CASE("map_point matches the honeycomb table row") {
    // E3: T = diag(1,-1), offset (0,-l): image (x1, -x2-l)
    const auto spec = fixtures::honeycomb_spec();
    const auto& e3 = spec.relation("E3");
    const Vector image = map_point(e3, v2(0.3, -1.0));
    CHECK(image.isApprox(v2(0.3, 1.0 - 2.0), 1e-14));
}

TEST_CASE("inverse_map undoes map_point") {
    const auto spec = fixtures::woven3d_spec();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-2, 2);
    for (const auto& rel : spec.relations) {
        for (int i = 0; i < 20; ++i) {
            const Vector x = v3(uni(rng), uni(rng), uni(rng));
            CHECK((inverse_map(rel, map_point(rel, x)) - x).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }

    // E2 has T = I, offset (w, l/2, 0): inverse of the origin is the offset
    const auto& e2 = spec.relation("E2");
    CHECK(inverse_map(e2, v3(0, 0, 0)).isApprox(v3(2, 2, 0), 1e-14));
}

TEST_CASE("map_point is an isometry") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(-3, 3);
    for (int d : {2, 3}) {
        EquivalenceRelation rel;
        rel.label = "R";
        rel.T = Transform(random_orthogonal(d, rng));
        rel.offset = Vector::Random(d);
        for (int trial = 0; trial < 50; ++trial) {
            Vector a(d), b(d);
            for (int i = 0; i < d; ++i) {
                a[i] = uni(rng);
                b[i] = uni(rng);
            }
            const double before = (a - b).norm();
            const double after = (map_point(rel, a) - map_point(rel, b)).norm();
            CHECK(std::abs(before - after) <= 1e-12 * std::max(1.0, before));
        }
    }
}

TEST_CASE("transform orthogonality invariants") {
    const auto spec = fixtures::woven3d_spec();
    for (const auto& rel : spec.relations) {
        CHECK(rel.T.orthogonality_defect() <= 1e-12);
        CHECK(std::abs(std::abs(rel.T.det()) - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(Transform(Matrix::Constant(3, 3, 0.5)), Error);
}

TEST_CASE("strain transform: point reflection is a no-op") {
    EquivalenceRelation rel;
    rel.T = Transform(-Matrix::Identity(3, 3));
    rel.offset = Vector::Zero(3);
    std::mt19937 rng(3);
    const Matrix eps = random_symmetric(3, rng);
    CHECK(max_abs_diff(transform_strain(rel, 1, eps), eps) <= 1e-15);
}

TEST_CASE("strain transform: z-preserving rotation flips the transverse shears") {
    // T = diag(-1,-1,1) negates eps13 and eps23, which is why the woven
    // case 2 needs gamma = -1 on E3/E4
    Matrix T = Matrix::Identity(3, 3);
    T(0, 0) = T(1, 1) = -1;
    EquivalenceRelation rel;
    rel.T = Transform(T);
    rel.offset = Vector::Zero(3);
    Matrix eps = Matrix::Zero(3, 3);
    eps(0, 2) = eps(2, 0) = 0.7;
    eps(1, 2) = eps(2, 1) = -0.4;
    const Matrix out = transform_strain(rel, 1, eps);
    CHECK(out(0, 2) == doctest::Approx(-0.7));
    CHECK(out(1, 2) == doctest::Approx(0.4));
    CHECK(out(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("strain transform: honeycomb shear needs gamma = -1") {
    // T = diag(-1,1) on pure shear: gamma = -1 restores the shear
    Matrix T = Matrix::Identity(2, 2);
    T(0, 0) = -1;
    EquivalenceRelation rel;
    rel.T = Transform(T);
    rel.offset = Vector::Zero(2);
    Matrix eps = Matrix::Zero(2, 2);
    eps(0, 1) = eps(1, 0) = 0.5;
    CHECK(max_abs_diff(transform_strain(rel, -1, eps), eps) <= 1e-15);
}

TEST_CASE("strain transform is linear and sign-involutive") {
    std::mt19937 rng(17);
    for (int d : {2, 3}) {
        EquivalenceRelation rel;
        rel.T = Transform(random_orthogonal(d, rng));
        rel.offset = Vector::Zero(d);
        const Matrix a = random_symmetric(d, rng);
        const Matrix b = random_symmetric(d, rng);
        CHECK(max_abs_diff(transform_strain(rel, -1, a), -transform_strain(rel, 1, a)) <= 1e-14);
        const Matrix sum = transform_strain(rel, 1, a + 2.0 * b);
        const Matrix parts = transform_strain(rel, 1, a) + 2.0 * transform_strain(rel, 1, b);
        CHECK(max_abs_diff(sum, parts) <= 1e-13);
    }
}

TEST_CASE("strain transform composition recovers the original") {
    std::mt19937 rng(23);
    for (int gamma : {1, -1}) {
        EquivalenceRelation fwd, bwd;
        const Matrix T = random_orthogonal(3, rng);
        fwd.T = Transform(T);
        fwd.offset = Vector::Zero(3);
        bwd.T = Transform(T.transpose());
        bwd.offset = Vector::Zero(3);
        const Matrix eps = random_symmetric(3, rng);
        const Matrix round = transform_strain(bwd, gamma, transform_strain(fwd, gamma, eps));
        CHECK(max_abs_diff(round, eps) <= 1e-13);  // gamma^2 = 1
    }
}

TEST_CASE("displacement transform") {
    EquivalenceRelation rel;
    rel.T = Transform(Matrix::Identity(3, 3));
    rel.offset = Vector::Zero(3);
    const Vector u = v3(1, 2, 3);
    CHECK(transform_displacement(rel, 1, u).isApprox(u));
    CHECK(transform_displacement(rel, -1, u).isApprox(-u));
    rel.T = Transform(-Matrix::Identity(3, 3));
    CHECK(transform_displacement(rel, 1, u).isApprox(v3(-1, -2, -3)));
}

TEST_CASE("isometry map composition and inverse") {
    std::mt19937 rng(31);
    IsometryMap a{Transform(random_orthogonal(3, rng)), Vector::Random(3)};
    IsometryMap b{Transform(random_orthogonal(3, rng)), Vector::Random(3)};
    const Vector x = Vector::Random(3);
    const IsometryMap ba = IsometryMap::compose(b, a);
    CHECK((ba.apply(x) - b.apply(a.apply(x))).norm() <= 1e-13);
    const IsometryMap id = IsometryMap::compose(a.inverse(), a);
    CHECK(id.is_identity(1e-12));
}
