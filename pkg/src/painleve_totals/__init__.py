"""Painleve II total integrals, mKdV conserved densities, trace formulae and
sine-kernel determinants."""

from .monodromy import (
    ClassMismatch, ConstraintError, MonodromyData, SolutionClass, classify, from_shortcut,
)
from .solutions import SolutionGrid, SolverOptions, solve, solve_dense
from .integrals import IntegralReport, TheoremId, closed_form, total_integral, weighted_integral_twzeta
from .mkdv import DensityEngine, default_engine
from .trace import TraceReport, reg_integral_alpha, trace_rhs, vp_integral_alpha
from .sine_kernel import det_sine, pv_solve, verify_identities

__version__ = "0.1.0"

__all__ = [
    "ClassMismatch", "ConstraintError", "MonodromyData", "SolutionClass", "classify", "from_shortcut",
    "SolutionGrid", "SolverOptions", "solve", "solve_dense",
    "IntegralReport", "TheoremId", "closed_form", "total_integral", "weighted_integral_twzeta",
    "DensityEngine", "default_engine",
    "TraceReport", "reg_integral_alpha", "trace_rhs", "vp_integral_alpha",
    "det_sine", "pv_solve", "verify_identities",
]
