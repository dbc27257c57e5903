from .basis import (
    RadialBasis,
    RadialProfile,
    gauss_legendre,
    graded_breakpoints,
    graded_rule,
    radial_sigma_grad,
)
from .params import (
    AngularChannel,
    DiracGapError,
    HypothesisUnmet,
    PhysicalParams,
    SingularEvaluationError,
)
from .potentials import PotentialSpec, eval_potential
from .spinors import DIRAC, SIGMA, DiracMatrices, free_dirac_projector, free_dirac_symbol

__all__ = [
    "AngularChannel",
    "DIRAC",
    "DiracGapError",
    "DiracMatrices",
    "HypothesisUnmet",
    "PhysicalParams",
    "PotentialSpec",
    "RadialBasis",
    "RadialProfile",
    "SIGMA",
    "SingularEvaluationError",
    "eval_potential",
    "free_dirac_projector",
    "free_dirac_symbol",
    "gauss_legendre",
    "graded_breakpoints",
    "graded_rule",
    "radial_sigma_grad",
]
