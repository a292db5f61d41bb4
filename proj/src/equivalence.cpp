#include "ruc/equivalence.hpp"

namespace ruc {

Transform::Transform(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || (entries_.rows() != 2 && entries_.rows() != 3)) {
        throw Error("InvalidTransform", "T", "transform must be a 2x2 or 3x3 matrix");
    }
    if (!is_orthogonal()) {
        throw Error("InvalidTransform", "T",
                    "transform is not orthogonal: |T^t T - I| = " +
                        std::to_string(orthogonality_defect()));
    }
}

Transform Transform::identity(Dim d) {
    const int n = dim_value(d);
    return Transform(Matrix::Identity(n, n));
}

bool Transform::is_identity(double tol) const {
    return max_abs_diff(entries_, Matrix::Identity(dim(), dim())) <= tol;
}

double Transform::orthogonality_defect() const {
    const Matrix gram = entries_.transpose() * entries_;
    return max_abs_diff(gram, Matrix::Identity(dim(), dim()));
}

BoundaryRegion BoundaryRegion::facet(int dim, int axis, double value,
                                     const std::vector<Axis>& spans) {
    std::vector<Axis> axes(spans);
    axes.resize(dim);
    axes[axis] = Axis{value, value};
    return BoundaryRegion(std::move(axes));
}

bool BoundaryRegion::contains(const Vector& x, double tol) const {
    if (x.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        if (x[i] < axes_[i].lo - tol || x[i] > axes_[i].hi + tol) return false;
    }
    return true;
}

std::vector<int> BoundaryRegion::fixed_axes() const {
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i)
        if (axes_[i].fixed()) out.push_back(i);
    return out;
}

Vector map_point(const EquivalenceRelation& rel, const Vector& x_hat) {
    return rel.T.matrix() * (x_hat - rel.offset);
}

Vector inverse_map(const EquivalenceRelation& rel, const Vector& x) {
    return rel.T.matrix().transpose() * x + rel.offset;
}

Matrix transform_strain(const Transform& T, int gamma, const Matrix& eps_hat) {
    return gamma * (T.matrix() * eps_hat * T.matrix().transpose());
}

Matrix transform_strain(const EquivalenceRelation& rel, int gamma, const Matrix& eps_hat) {
    return transform_strain(rel.T, gamma, eps_hat);
}

Vector transform_displacement(const EquivalenceRelation& rel, int gamma, const Vector& u_hat) {
    return gamma * (rel.T.matrix() * u_hat);
}

IsometryMap IsometryMap::inverse() const {
    IsometryMap inv;
    inv.T = T.transposed();
    inv.offset = -(T.matrix() * offset);
    return inv;
}

IsometryMap IsometryMap::compose(const IsometryMap& second, const IsometryMap& first) {
    // second(first(x)) = T2 T1 (x - o1) - T2 o2 = Tc (x - oc),
    // with Tc = T2 T1 and oc = o1 + T1^t o2.
    IsometryMap out;
    out.T = Transform(second.T.matrix() * first.T.matrix());
    out.offset = first.offset + first.T.matrix().transpose() * second.offset;
    return out;
}

bool IsometryMap::is_identity(double tol) const {
    return T.is_identity(tol) && offset.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace ruc
