#include "ruc/elements.hpp"

#include <cmath>

namespace ruc {

namespace {

// Corner signs in the parent element, matching the node ordering convention.
constexpr std::array<std::array<double, 2>, 4> kQ4 = {{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
constexpr std::array<std::array<double, 3>, 8> kH8 = {{{-1, -1, -1},
                                                       {1, -1, -1},
                                                       {1, 1, -1},
                                                       {-1, 1, -1},
                                                       {-1, -1, 1},
                                                       {1, -1, 1},
                                                       {1, 1, 1},
                                                       {-1, 1, 1}}};

}  // namespace

std::vector<GaussPoint> gauss_rule(Dim dim) {
    const double g = 1.0 / std::sqrt(3.0);
    std::vector<GaussPoint> pts;
    if (dim == Dim::two) {
        for (double eta : {-g, g})
            for (double xi : {-g, g}) {
                GaussPoint p;
                p.xi = Vector(2);
                p.xi << xi, eta;
                p.weight = 1.0;
                pts.push_back(p);
            }
    } else {
        for (double zeta : {-g, g})
            for (double eta : {-g, g})
                for (double xi : {-g, g}) {
                    GaussPoint p;
                    p.xi = Vector(3);
                    p.xi << xi, eta, zeta;
                    p.weight = 1.0;
                    pts.push_back(p);
                }
    }
    return pts;
}

Vector shape_values(Dim dim, const Vector& xi) {
    if (dim == Dim::two) {
        Vector n(4);
        for (int i = 0; i < 4; ++i)
            n[i] = 0.25 * (1 + kQ4[i][0] * xi[0]) * (1 + kQ4[i][1] * xi[1]);
        return n;
    }
    Vector n(8);
    for (int i = 0; i < 8; ++i)
        n[i] = 0.125 * (1 + kH8[i][0] * xi[0]) * (1 + kH8[i][1] * xi[1]) *
               (1 + kH8[i][2] * xi[2]);
    return n;
}

Matrix shape_gradients(Dim dim, const Vector& xi) {
    if (dim == Dim::two) {
        Matrix g(4, 2);
        for (int i = 0; i < 4; ++i) {
            g(i, 0) = 0.25 * kQ4[i][0] * (1 + kQ4[i][1] * xi[1]);
            g(i, 1) = 0.25 * kQ4[i][1] * (1 + kQ4[i][0] * xi[0]);
        }
        return g;
    }
    Matrix g(8, 3);
    for (int i = 0; i < 8; ++i) {
        g(i, 0) = 0.125 * kH8[i][0] * (1 + kH8[i][1] * xi[1]) * (1 + kH8[i][2] * xi[2]);
        g(i, 1) = 0.125 * kH8[i][1] * (1 + kH8[i][0] * xi[0]) * (1 + kH8[i][2] * xi[2]);
        g(i, 2) = 0.125 * kH8[i][2] * (1 + kH8[i][0] * xi[0]) * (1 + kH8[i][1] * xi[1]);
    }
    return g;
}

ElementGeometry element_geometry(Dim dim, const Matrix& coords, const Vector& xi) {
    ElementGeometry geo;
    const Matrix grad_xi = shape_gradients(dim, xi);
    geo.jacobian = coords.transpose() * grad_xi;  // d x d
    geo.det = geo.jacobian.determinant();
    geo.grad_x = grad_xi * geo.jacobian.inverse();
    return geo;
}

Matrix strain_displacement(Dim dim, const Matrix& grad_x) {
    const int d = dim_value(dim);
    const int nn = static_cast<int>(grad_x.rows());
    Matrix B = Matrix::Zero(voigt_size(dim), nn * d);
    for (int a = 0; a < nn; ++a) {
        const int c = a * d;
        if (dim == Dim::two) {
            B(0, c + 0) = grad_x(a, 0);
            B(1, c + 1) = grad_x(a, 1);
            B(2, c + 0) = grad_x(a, 1);
            B(2, c + 1) = grad_x(a, 0);
        } else {
            B(0, c + 0) = grad_x(a, 0);
            B(1, c + 1) = grad_x(a, 1);
            B(2, c + 2) = grad_x(a, 2);
            // engineering shear rows: 23, 13, 12
            B(3, c + 1) = grad_x(a, 2);
            B(3, c + 2) = grad_x(a, 1);
            B(4, c + 0) = grad_x(a, 2);
            B(4, c + 2) = grad_x(a, 0);
            B(5, c + 0) = grad_x(a, 1);
            B(5, c + 1) = grad_x(a, 0);
        }
    }
    return B;
}

}  // namespace ruc
