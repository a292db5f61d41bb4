"""Reduced unit cell toolkit.

Periodic boundary conditions for sub-domains smaller than the unit cell,
derived from equivalence relations (transform + offset pairs), with load
admissibility analysis and a built-in linear elasticity solver for
verification and homogenization.
"""

from ._core import (
    CellSpec,
    EquivalenceReport,
    FieldSolution,
    GammaAssignment,
    HomogenizedStiffness,
    LoadCase,
    Mesh,
    RucError,
    ValidationReport,
    check_admissibility,
    constraints_json,
    enumerate_load_cases,
    fixtures,
    homogenize,
    load_mesh,
    load_spec,
    solve,
    validate,
    validate_with_mesh,
    verify_equivalence,
)

__all__ = [
    "CellSpec",
    "EquivalenceReport",
    "FieldSolution",
    "GammaAssignment",
    "HomogenizedStiffness",
    "LoadCase",
    "Mesh",
    "RucError",
    "ValidationReport",
    "check_admissibility",
    "constraints_json",
    "enumerate_load_cases",
    "fixtures",
    "homogenize",
    "load_mesh",
    "load_spec",
    "solve",
    "validate",
    "validate_with_mesh",
    "verify_equivalence",
]

__version__ = "0.1.0"
