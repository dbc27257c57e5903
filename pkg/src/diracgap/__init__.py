"""Eigenvalues of Dirac operators inside the spectral gap, and companion numerics.

Submodules: ``gapsolver`` (collapse-free B-spline min-max solver), ``hardy``
(Hardy-type inequality checks), ``soliton`` (nonlinear Dirac shooting),
``magnetic`` (lowest relativistic Landau level) and ``cli``.
"""
from .core import (
    AngularChannel,
    DiracGapError,
    HypothesisUnmet,
    PhysicalParams,
    PotentialSpec,
    RadialBasis,
)
from .gapsolver import converge_levels, gap_basis, lambda_T, min_lambda_T, solve_level, solve_levels

__version__ = "0.1.0"

__all__ = [
    "AngularChannel",
    "DiracGapError",
    "HypothesisUnmet",
    "PhysicalParams",
    "PotentialSpec",
    "RadialBasis",
    "converge_levels",
    "gap_basis",
    "lambda_T",
    "min_lambda_T",
    "solve_level",
    "solve_levels",
]
