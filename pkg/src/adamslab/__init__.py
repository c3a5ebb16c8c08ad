"""Numerical laboratory for singular Adams-type inequalities and a mountain-pass solver."""

from .functionals import (
    EnormReport,
    ProbeTable,
    adams_functional,
    atc_identity_rhs,
    atsc_probe,
    e_norm,
    embedding_probe,
    scale,
    subcritical_quotient,
)
from .mp_solver import ProblemSpec, SolveReport, diagnostics, energy, mountain_pass_solve, weak_gradient
from .radial_core import RadialFunction, RadialGrid, derived_constants, make_log_grid, measures
from .sequences import PiecewiseRadial, cc_sharpness_family, moser_adams_xi, truncated_log_profile
from .young import YoungParams, phi, split_constant

__version__ = "0.1.0"

__all__ = [
    "EnormReport",
    "PiecewiseRadial",
    "ProbeTable",
    "ProblemSpec",
    "RadialFunction",
    "RadialGrid",
    "SolveReport",
    "YoungParams",
    "adams_functional",
    "atc_identity_rhs",
    "atsc_probe",
    "cc_sharpness_family",
    "derived_constants",
    "diagnostics",
    "e_norm",
    "embedding_probe",
    "energy",
    "make_log_grid",
    "measures",
    "moser_adams_xi",
    "mountain_pass_solve",
    "phi",
    "scale",
    "split_constant",
    "subcritical_quotient",
    "truncated_log_profile",
    "weak_gradient",
]
