#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ruc/equivalence.hpp"
#include "ruc/types.hpp"

namespace ruc {

enum class CellKind { UC, OrUC, rUC };

std::string to_string(CellKind k);
CellKind cell_kind_from_string(const std::string& s);

/// Per-axis closed interval of the cell bounding box.
struct AxisBounds {
    double min = 0.0;
    double max = 0.0;
    double extent() const { return max - min; }
};

/// Isotropic material or a full symmetric stiffness in Voigt form.
/// Plane strain/stress selection for 2D happens when the stiffness matrix
/// is requested, not at storage time.
struct Material {
    std::optional<double> E;
    std::optional<double> nu;
    std::optional<Matrix> stiffness_voigt;  // voigt_size x voigt_size

    bool isotropic() const { return E.has_value(); }
};

enum class PlaneKind { strain, stress };

/// Tag -> material map. Tags are the per-element integers of the mesh.
using MaterialSet = std::map<int, Material>;

/// Voigt stiffness for a material (3x3 in 2D, 6x6 in 3D).
Matrix material_stiffness(const Material& m, Dim dim, PlaneKind plane);

/// Declarative description of a unit cell / reduced unit cell: bounding box,
/// periodicity vectors and the set of adjacent-sub-domain equivalence
/// relations.
struct CellSpec {
    Dim dim = Dim::three;
    std::vector<AxisBounds> bbox;
    std::vector<Vector> periodicity;         // lattice vectors d_k
    std::vector<EquivalenceRelation> relations;
    CellKind kind = CellKind::rUC;
    /// Facet patches declared traction-free (no partner sub-domain supplies
    /// constraints there). Exempt from the coverage check.
    std::vector<BoundaryRegion> free_regions;

    int n() const { return static_cast<int>(relations.size()); }
    double bbox_diagonal() const;
    Vector bbox_center() const;
    const EquivalenceRelation& relation(const std::string& label) const;
};

struct ValidationIssue {
    enum class Severity { error, warning };
    Severity severity;
    std::string code;     // e.g. "Orthogonality", "UncoveredFacet", "Consistency"
    std::string entity;   // relation label, facet name, node id
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const;
    std::vector<const ValidationIssue*> errors() const;
    std::string summary() const;
};

class Mesh;  // defined in ruc/mesh.hpp

/// Validates orthogonality of every relation transform, coverage of the
/// boundary facets by relation source/image patches, pointwise consistency
/// where source regions overlap, and the kind-specific invariants.
/// When a mesh is given, additionally checks that every mesh boundary node
/// lying on a non-exempt facet is reachable by some relation.
ValidationReport validate(const CellSpec& spec, const Mesh* mesh = nullptr);

/// Classical periodic cell: one identity-transform relation per periodicity
/// vector, with the source facet split as needed so that every image stays
/// inside the bounding box (non-orthogonal vectors wrap through neighbouring
/// lattice combinations).
CellSpec classical_uc_spec(Dim dim, const std::vector<AxisBounds>& bbox,
                           const std::vector<Vector>& periodicity);

}  // namespace ruc
