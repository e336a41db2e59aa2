"""Numerical checks for Carleman weights on plane cones."""

from .errors import (
    BracketError,
    BranchError,
    CarlemanError,
    ConvergenceError,
    DegenerateGradientError,
    DomainError,
    NoRootError,
    ParameterError,
    SingularityError,
    StiffnessError,
)
from .polar_weight import PolarPoint, CartesianPoint, PolarWeight, cospow_weight, poly_weight, sverak_weight
from .pseudoconvexity import angular_report, eq6_value
from .extremal_ode import shoot, solve_fpp

__all__ = [
    "BracketError", "BranchError", "CarlemanError", "ConvergenceError", "DegenerateGradientError",
    "DomainError", "NoRootError", "ParameterError", "SingularityError", "StiffnessError",
    "PolarPoint", "CartesianPoint", "PolarWeight", "cospow_weight", "poly_weight", "sverak_weight",
    "angular_report", "eq6_value", "shoot", "solve_fpp",
]
