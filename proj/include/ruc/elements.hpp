#pragma once

#include <array>
#include <vector>

#include "ruc/types.hpp"

namespace ruc {

/// Isoparametric Q4/H8 shape machinery shared by assembly, recovery and
/// mesh validation. Full Gauss integration: 2x2 in 2D, 2x2x2 in 3D.
struct GaussPoint {
    Vector xi;      // parent coordinates
    double weight;
};

std::vector<GaussPoint> gauss_rule(Dim dim);

/// Shape function values at parent coordinates (4 or 8 entries).
Vector shape_values(Dim dim, const Vector& xi);

/// Shape function gradients w.r.t. parent coordinates, one row per node.
Matrix shape_gradients(Dim dim, const Vector& xi);

struct ElementGeometry {
    Matrix jacobian;      // d x d, d(x)/d(xi)
    double det = 0.0;
    Matrix grad_x;        // nodes x d, gradients w.r.t. physical coordinates
};

/// Geometry of one element at a parent point. `coords` holds one node
/// coordinate per row.
ElementGeometry element_geometry(Dim dim, const Matrix& coords, const Vector& xi);

/// Strain-displacement matrix in Voigt order (11,22,12) / (11,22,33,23,13,12)
/// with engineering shear rows. Columns follow the (node, component) DOF
/// order.
Matrix strain_displacement(Dim dim, const Matrix& grad_x);

}  // namespace ruc
