#pragma once

#include <string>
#include <vector>

#include "ruc/admissibility.hpp"
#include "ruc/pairing.hpp"

namespace ruc {

/// Multipoint constraint u(A) - coeff u(Ahat) = rhs on nodal displacement
/// vectors, with coeff = gamma T_composed and
/// rhs = -<eps> T_composed x^{O_Ehat,composed}.
struct ConstraintEquation {
    enum class Kind { eliminating, self, redundant };

    int slave = -1;
    int master = -1;
    Matrix coeff;
    Vector rhs;
    Kind kind = Kind::eliminating;
    std::vector<std::string> chain;

    bool self_pair() const { return kind == Kind::self; }
};

/// Builds one vector constraint per resolved pair. The load reversal factors
/// come from check_admissibility; an inadmissible load throws MissingGamma.
std::vector<ConstraintEquation> build_constraints(const ResolvedPairing& pairs,
                                                  const CellSpec& spec, const MacroStrain& eps);

/// Same, with the per-relation signs supplied explicitly (used by the
/// per-load-case homogenization driver and by negative-control tests).
std::vector<ConstraintEquation> build_constraints_with_gammas(const ResolvedPairing& pairs,
                                                              const CellSpec& spec,
                                                              const std::vector<int>& gammas,
                                                              const MacroStrain& eps);

enum class ConstraintFormat { json, csv, solver_deck };

/// Serializes equations: json is canonical and lossless, csv carries one
/// scalar equation per row, solver_deck is a text block of linear equation
/// cards for import into external FE packages.
std::string emit(const std::vector<ConstraintEquation>& equations, Dim dim,
                 ConstraintFormat format);

/// Inverse of emit(..., json).
std::vector<ConstraintEquation> parse_constraints_json(const std::string& payload);

}  // namespace ruc
