"""Movable poles and nonlinear eigenvalues of the Painleve I and II equations."""

from ._painleve import (
    EigenTable,
    EigenvalueRecord,
    IntegrationConfig,
    PainleveError,
    PoleEvent,
    RichardsonResult,
    SolutionClass,
    Trajectory,
    asymptotic_branch,
    classify,
    closed_form_constants,
    count_toy_maxima,
    eigen_table,
    energy,
    extract_constant,
    gamma,
    hermitian_quartic_energy,
    integrate,
    richardson,
    validate_separatrix,
    wkb_energy,
)

__all__ = [
    "EigenTable",
    "EigenvalueRecord",
    "IntegrationConfig",
    "PainleveError",
    "PoleEvent",
    "RichardsonResult",
    "SolutionClass",
    "Trajectory",
    "asymptotic_branch",
    "classify",
    "closed_form_constants",
    "count_toy_maxima",
    "eigen_table",
    "energy",
    "extract_constant",
    "gamma",
    "hermitian_quartic_energy",
    "integrate",
    "richardson",
    "validate_separatrix",
    "wkb_energy",
]
