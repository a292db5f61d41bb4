#pragma once

#include <optional>
#include <vector>

#include "ruc/cellspec.hpp"
#include "ruc/types.hpp"

namespace ruc {

/// Voigt component order is (11, 22, 12) in 2D and (11, 22, 33, 23, 13, 12)
/// in 3D. Strain vectors carry engineering shear (doubled off-diagonals),
/// stress vectors do not.

Vector strain_to_voigt(Dim dim, const Matrix& eps);
Matrix voigt_to_strain(Dim dim, const Vector& v);
Vector stress_to_voigt(Dim dim, const Matrix& sig);
Matrix voigt_to_stress(Dim dim, const Vector& v);

std::vector<std::string> voigt_labels(Dim dim);

/// Voigt-space operator of eps -> T eps T^t acting on engineering-strain
/// vectors.
Matrix strain_transform_operator(Dim dim, const Transform& T);

/// Prescribed volume-average strain. Thin wrapper that pins symmetry.
struct MacroStrain {
    Matrix tensor;

    MacroStrain() = default;
    explicit MacroStrain(Matrix t);
    static MacroStrain from_voigt(Dim dim, const Vector& v);

    Dim dim() const { return tensor.rows() == 2 ? Dim::two : Dim::three; }
    Vector voigt() const { return strain_to_voigt(dim(), tensor); }
};

/// Outcome of the admissibility evaluation: one load reversal factor per
/// relation plus the residual of the admissibility condition.
struct GammaAssignment {
    bool admissible = false;
    std::vector<int> gammas;        // +-1 per relation, meaningful when admissible
    std::vector<double> residuals;  // best residual per relation
    std::string worst_relation;     // set when inadmissible
    double worst_residual = 0.0;

    int gamma(int i) const { return gammas[i]; }
};

/// Evaluates <eps> = gamma_i T_i <eps> T_i^t for every relation of the spec.
/// Ties (both signs pass) resolve to +1.
GammaAssignment check_admissibility(const CellSpec& spec, const MacroStrain& eps,
                                    double tol = Tol::admissibility);

/// One admissible loading case: a sign vector and the strain subspace it
/// admits (orthonormal Voigt basis, canonical orientation).
struct LoadCase {
    std::vector<int> gammas;
    Matrix basis;  // voigt_size x subspace_dim, orthonormal columns

    int dimension() const { return static_cast<int>(basis.cols()); }
    /// Distance of a strain from the subspace, relative to its norm.
    double distance(const Vector& strain_voigt) const;
    bool contains(const Vector& strain_voigt, double tol = Tol::admissibility) const;
};

/// All maximal admissible load cases of a spec, found by branch-and-prune
/// over the sign vectors. Order: descending subspace dimension, then
/// lexicographic gammas with +1 before -1.
std::vector<LoadCase> enumerate_load_cases(const CellSpec& spec, int max_relations = 24);

}  // namespace ruc
