#pragma once

#include <Eigen/SparseCore>

#include "ruc/admissibility.hpp"
#include "ruc/constraints.hpp"
#include "ruc/mesh.hpp"
#include "ruc/pairing.hpp"

namespace ruc {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Element-stiffness and global assembly. Q4 (plane strain/stress) and H8
/// with full Gauss integration. Assembly is element-parallel with a
/// deterministic reduction: results are bit-stable for any thread count.
SparseMatrix assemble(const Mesh& mesh, const MaterialSet& materials, PlaneKind plane,
                      int threads = 1);

Matrix element_stiffness(Dim dim, const Matrix& coords, const Matrix& C);

struct GaussSample {
    int element = 0;
    Vector position;
    double weight = 0.0;  // gauss weight * |J|
    Vector strain;        // Voigt, engineering shear
    Vector stress;        // Voigt
};

struct FieldSolution {
    Dim dim = Dim::two;
    Vector u;  // nodal displacements, node-major (x,y[,z] per node)
    std::vector<GaussSample> gauss;
    double volume = 0.0;      // material volume
    double box_volume = 0.0;  // cell box volume (equals `volume` for solid cells)
    Matrix macro_strain;
    std::vector<int> gammas;  // per-relation signs used for the constraints

    // solve diagnostics
    double constraint_residual = 0.0;  // max relative violation over equations
    double rotation_norm = 0.0;        // volume-average rotation magnitude
    double fluctuation_max = 0.0;      // max nodal |u - <eps> x|
    double solver_residual = 0.0;

    // cell-volume averages (1/V) * integral over the material
    Matrix average_strain() const;
    Matrix average_stress() const;
};

/// Linear parts and load reversal products of the finite group generated by
/// the spec relations. Averaging gamma S M S^t over the group projects a
/// tensor onto the admissible pattern; sub-domain averages of a reduced cell
/// recover their macroscopic value through this projection (the full-cell
/// average equals the projected reduced-cell average).
std::vector<std::pair<Matrix, int>> relation_group(const CellSpec& spec,
                                                   const std::vector<int>& gammas);

Matrix symmetrize_over_group(const std::vector<std::pair<Matrix, int>>& group, const Matrix& m);

/// Displacement reduction u = R z + c eliminating slave DOFs through the
/// constraint set. Canonical masters touched by degenerate (self/redundant)
/// constraints keep only the consistent subspace of their DOFs; rigid
/// translations left free by the constraints are pinned at the node nearest
/// the frame origin.
struct Reduction {
    SparseMatrix R;
    Vector c;
    int n_reduced = 0;
};

Reduction build_reduction(const Mesh& mesh, const std::vector<ConstraintEquation>& equations,
                          const MacroStrain& eps);

/// Full pipeline for one load: admissibility, pairing, constraint build,
/// elimination, sparse SPD solve, field recovery.
FieldSolution solve_ruc(const Mesh& mesh, const CellSpec& spec, const MaterialSet& materials,
                        const MacroStrain& eps, PlaneKind plane = PlaneKind::strain,
                        int threads = 1);

/// Same but with prescribed load reversal factors (per-case homogenization
/// and negative-control tests).
FieldSolution solve_with_gammas(const Mesh& mesh, const CellSpec& spec,
                                const MaterialSet& materials, const std::vector<int>& gammas,
                                const MacroStrain& eps, PlaneKind plane = PlaneKind::strain,
                                int threads = 1);

struct HomogenizedStiffness {
    Matrix C;  // voigt_size x voigt_size, symmetrized
    double asymmetry = 0.0;          // max |C - C^t| relative
    std::vector<int> case_of_column; // load case per unit strain, -1 if none
    std::vector<LoadCase> cases;

    bool complete() const;
};

/// Macro strain -> volume-average stress map, assembled column by column
/// from unit-strain solves. Unit strains are partitioned across the spec's
/// admissible load cases; columns admissible under no case are masked out.
HomogenizedStiffness homogenize(const Mesh& mesh, const CellSpec& spec,
                                const MaterialSet& materials, PlaneKind plane = PlaneKind::strain,
                                int threads = 1);

/// Placement of one transformed copy of the reduced cell inside the full
/// cell: x_uc = map(x_ruc), fields transform with the linear part S and the
/// chain's load reversal product.
struct TilePlacement {
    IsometryMap map;
    std::vector<int> chain;  // relation indices (multiset; sign product matters)

    int gamma(const std::vector<int>& gammas) const;
};

/// Group generated by the spec relations, modulo the full-cell lattice,
/// restricted to placements overlapping the full-cell box.
std::vector<TilePlacement> enumerate_tiling(const CellSpec& ruc_spec, const CellSpec& uc_spec);

struct EquivalenceReport {
    double max_strain_residual = 0.0;  // relative to the field maximum
    double max_stress_residual = 0.0;
    Vector worst_location;
    int compared = 0;
    int missing = 0;     // reduced-cell Gauss points without a full-cell partner
    int placements = 0;

    double max_residual() const { return std::max(max_strain_residual, max_stress_residual); }
};

/// Checks the load equivalence relations eps_E(A) = gamma T eps(Ahat) T^t,
/// sigma likewise, at every corresponding Gauss point pair between a
/// full-cell solution and a reduced-cell solution. Positions are matched
/// through the tiling placements, wrapped by the full-cell lattice.
EquivalenceReport verify_equivalence(const FieldSolution& uc, const FieldSolution& ruc,
                                     const CellSpec& ruc_spec, const CellSpec& uc_spec,
                                     const std::vector<int>& gammas);

}  // namespace ruc
