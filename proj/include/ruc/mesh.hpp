#pragma once

#include <functional>
#include <vector>

#include "ruc/cellspec.hpp"
#include "ruc/types.hpp"

namespace ruc {

/// Conforming mesh of Q4 quads (2D) or H8 hexes (3D) with one material tag
/// per element. Node order follows the usual counter-clockwise / bottom-top
/// isoparametric convention.
class Mesh {
  public:
    Mesh() = default;
    Mesh(Dim dim, std::vector<Vector> nodes, std::vector<std::vector<int>> elements,
         std::vector<int> material_tags);

    Dim dim() const { return dim_; }
    int n_nodes() const { return static_cast<int>(nodes_.size()); }
    int n_elements() const { return static_cast<int>(elements_.size()); }
    int nodes_per_element() const { return dim_ == Dim::two ? 4 : 8; }

    const Vector& node(int i) const { return nodes_[i]; }
    const std::vector<Vector>& nodes() const { return nodes_; }
    const std::vector<int>& element(int e) const { return elements_[e]; }
    const std::vector<std::vector<int>>& elements() const { return elements_; }
    int material_tag(int e) const { return material_tags_[e]; }
    const std::vector<int>& material_tags() const { return material_tags_; }

    /// Nodes on the mesh boundary (incident to a facet owned by exactly one
    /// element). Computed once and cached.
    const std::vector<int>& boundary_nodes() const;

    /// Sorted material tags of the elements incident to a node.
    std::vector<int> incident_material_tags(int node) const;

    double diagonal() const;

    /// Checks node coordinates against the spec bounding box (when given) and
    /// element orientation (positive Jacobian at all Gauss points).
    ValidationReport validate(const CellSpec* spec = nullptr) const;

  private:
    Dim dim_ = Dim::two;
    std::vector<Vector> nodes_;
    std::vector<std::vector<int>> elements_;
    std::vector<int> material_tags_;
    mutable std::vector<int> boundary_cache_;
    mutable bool boundary_valid_ = false;
};

/// Structured grid on an axis-aligned box. `material` receives the element
/// center and returns its tag.
Mesh structured_mesh(Dim dim, const std::vector<AxisBounds>& bbox,
                     const std::vector<int>& divisions,
                     const std::function<int(const Vector&)>& material);

/// One isoparametric quad block of a block-structured 2D mesh: four corners
/// (counter-clockwise) subdivided n0 x n1.
struct QuadBlock {
    Eigen::Matrix<double, 4, 2> corners;
    int n0 = 1;
    int n1 = 1;
    int material = 1;
};

/// Mesh a list of quad blocks, merging coincident nodes across block
/// interfaces. Blocks must conform (matching node positions along shared
/// edges).
Mesh mesh_from_blocks(const std::vector<QuadBlock>& blocks, double merge_tol);

/// Union of transformed copies of a mesh. Each map places one copy; node
/// order inside mirrored elements is reversed to keep Jacobians positive.
/// Coincident nodes across copies are merged.
Mesh merge_transformed_copies(const Mesh& mesh, const std::vector<IsometryMap>& copies,
                              double merge_tol);

}  // namespace ruc
