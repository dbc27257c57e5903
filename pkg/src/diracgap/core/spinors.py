"""Dirac and Pauli matrices (standard representation) and free projectors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import PhysicalParams

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _alpha(s):
    z = np.zeros((2, 2), dtype=complex)
    return np.block([[z, s], [s, z]])


@dataclass(frozen=True)
class DiracMatrices:
    alpha: tuple
    beta: np.ndarray
    sigma: tuple

    @classmethod
    def standard(cls) -> "DiracMatrices":
        beta = np.diag([1, 1, -1, -1]).astype(complex)
        return cls(alpha=tuple(_alpha(s) for s in SIGMA), beta=beta, sigma=SIGMA)

    def anticommutator_defect(self) -> float:
        """Largest entry of every CAR residual; zero for a valid set."""
        eye = np.eye(4)
        worst = 0.0
        mats = list(self.alpha)
        for k, a in enumerate(mats):
            for l, b in enumerate(mats):
                worst = max(worst, np.abs(a @ b + b @ a - 2 * (k == l) * eye).max())
            worst = max(worst, np.abs(a @ self.beta + self.beta @ a).max())
        return max(worst, np.abs(self.beta @ self.beta - eye).max())


DIRAC = DiracMatrices.standard()


def free_dirac_symbol(p, params: PhysicalParams = PhysicalParams()) -> np.ndarray:
    """D_c(p) = c alpha.p + c^2 beta as a 4x4 matrix."""
    c = params.c
    p = np.asarray(p, dtype=float)
    return c * sum(pk * ak for pk, ak in zip(p, DIRAC.alpha)) + c**2 * DIRAC.beta


def free_dirac_projector(p, params: PhysicalParams = PhysicalParams(), sign: int = +1) -> np.ndarray:
    """Spectral projector of the free Dirac operator at momentum ``p``.

    P_sign(p) = (sign * D_c(p) + E(p)) / (2 E(p)),  E(p) = sqrt(c^2|p|^2 + c^4).
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    c = params.c
    energy = np.sqrt(c**2 * float(np.dot(p, p)) + c**4)
    return (sign * free_dirac_symbol(p, params) + energy * np.eye(4)) / (2 * energy)
