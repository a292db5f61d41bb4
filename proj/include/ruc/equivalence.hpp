#pragma once

#include <optional>
#include <vector>

#include "ruc/types.hpp"

namespace ruc {

/// Orthogonal transformation matrix between the local coordinate systems of
/// two equivalent sub-domains. Entries are +-1/0 in practice, but any
/// orthogonal matrix is accepted.
class Transform {
  public:
    Transform() = default;
    explicit Transform(Matrix entries);

    static Transform identity(Dim d);

    const Matrix& matrix() const { return entries_; }
    int dim() const { return static_cast<int>(entries_.rows()); }
    double det() const { return entries_.determinant(); }
    bool is_identity(double tol = Tol::orthogonality) const;

    /// Largest deviation of T^t T from the identity.
    double orthogonality_defect() const;
    bool is_orthogonal(double tol = Tol::orthogonality) const {
        return orthogonality_defect() <= tol;
    }

    Transform transposed() const { return Transform(entries_.transpose()); }

  private:
    Matrix entries_;
};

/// Axis-aligned boundary patch: per coordinate either a fixed value or a
/// closed interval.
class BoundaryRegion {
  public:
    struct Axis {
        double lo = 0.0;
        double hi = 0.0;
        bool fixed() const { return lo == hi; }
    };

    BoundaryRegion() = default;
    explicit BoundaryRegion(std::vector<Axis> axes) : axes_(std::move(axes)) {}

    static BoundaryRegion facet(int dim, int axis, double value,
                                const std::vector<Axis>& spans);

    int dim() const { return static_cast<int>(axes_.size()); }
    const std::vector<Axis>& axes() const { return axes_; }

    bool contains(const Vector& x, double tol) const;

    /// Axes along which the region is a single fixed plane.
    std::vector<int> fixed_axes() const;

  private:
    std::vector<Axis> axes_;
};

/// Pair (T, x^{O_Ehat}) linking the frame of an adjacent equivalent
/// sub-domain to the analysis frame, plus the boundary patch whose points
/// this relation supplies partners for.
struct EquivalenceRelation {
    std::string label;
    Transform T;
    Vector offset;           // origin of the adjacent frame, in this frame
    BoundaryRegion source_region;

    int dim() const { return T.dim(); }
};

/// x^A = T (x^Ahat - offset).
Vector map_point(const EquivalenceRelation& rel, const Vector& x_hat);

/// Inverse of map_point: x^Ahat = T^t x^A + offset.
Vector inverse_map(const EquivalenceRelation& rel, const Vector& x);

/// gamma * T * eps_hat * T^t. The load reversal factor gamma is +-1.
Matrix transform_strain(const EquivalenceRelation& rel, int gamma, const Matrix& eps_hat);
Matrix transform_strain(const Transform& T, int gamma, const Matrix& eps_hat);

/// gamma * T * u_hat.
Vector transform_displacement(const EquivalenceRelation& rel, int gamma, const Vector& u_hat);

/// Affine isometry x -> T (x - offset) with the same parametrization as an
/// equivalence relation. Used for composed relation chains and for placing
/// transformed copies of a reduced cell inside the full one.
struct IsometryMap {
    Transform T;
    Vector offset;

    static IsometryMap identity(Dim d) {
        return {Transform::identity(d), Vector::Zero(dim_value(d))};
    }

    Vector apply(const Vector& x) const { return T.matrix() * (x - offset); }

    /// Map with arguments swapped: if this maps A-hat to A, the inverse maps
    /// A to A-hat. Inverse of x -> T(x - o) is x -> T^t x + o = T^t (x - (-T o)).
    IsometryMap inverse() const;

    /// Composition: apply `first`, then `second`.
    static IsometryMap compose(const IsometryMap& second, const IsometryMap& first);

    bool is_identity(double tol) const;
};

}  // namespace ruc
