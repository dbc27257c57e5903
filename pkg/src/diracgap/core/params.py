"""Physical parameters and angular channels (units m = hbar = 1)."""
from __future__ import annotations

from dataclasses import dataclass


class DiracGapError(Exception):
    """Base class for all numerical failures raised by the package."""


class SingularEvaluationError(DiracGapError):
    """A singular expression was evaluated exactly at its singular point."""


class HypothesisUnmet(DiracGapError):
    """The input violates a sampled hypothesis of the requested computation."""


@dataclass(frozen=True)
class PhysicalParams:
    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"speed of light must be positive, got {self.c}")

    @property
    def gap(self) -> tuple[float, float]:
        """Endpoints of the spectral gap (-c^2, c^2)."""
        return (-self.c**2, self.c**2)


@dataclass(frozen=True)
class AngularChannel:
    """Spherical-spinor sector of a radial Dirac problem.

    ``kappa = -1`` is the s_1/2 sector used by the soliton ansatz; its lower
    component lives in ``-kappa = +1``.
    """

    kappa: int = -1

    def __post_init__(self):
        if int(self.kappa) != self.kappa or self.kappa == 0:
            raise ValueError(f"kappa must be a nonzero integer, got {self.kappa}")

    @property
    def orbital_l(self) -> int:
        """Orbital angular momentum of the upper spherical spinor."""
        return self.kappa if self.kappa > 0 else -self.kappa - 1

    @property
    def partner(self) -> "AngularChannel":
        return AngularChannel(-self.kappa)
