"""Roots of polynomial families generated by 1 / (1 + B(z) t + A(z) t^n)."""

__version__ = "0.1.0"

from .errors import (
    DegenerateEquation,
    DegenerateLeading,
    NonConvergence,
    RealnessViolation,
    SignMismatch,
)
from .family import FamilySpec, chebyshev_spec, coefficients, degree_bound, eval_scaled, quintic_spec
from .locator import curve_membership, locate_roots, trace_curve, verify_theorem, z_from_theta
from .polynomial import ComplexPoly, RootSolveOptions, roots_all
from .theta_kernel import find_theta_roots, h_eval, sign_grid
from .trinomial_denominator import q_discriminant, roots_and_quotients

__all__ = [
    "ComplexPoly",
    "DegenerateEquation",
    "DegenerateLeading",
    "FamilySpec",
    "NonConvergence",
    "RealnessViolation",
    "RootSolveOptions",
    "SignMismatch",
    "chebyshev_spec",
    "coefficients",
    "curve_membership",
    "degree_bound",
    "eval_scaled",
    "find_theta_roots",
    "h_eval",
    "locate_roots",
    "q_discriminant",
    "quintic_spec",
    "roots_all",
    "roots_and_quotients",
    "sign_grid",
    "trace_curve",
    "verify_theorem",
    "z_from_theta",
]
