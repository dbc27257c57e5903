"""Radial scalar potentials V(r) for the gap solver."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .params import SingularEvaluationError

KINDS = ("coulomb", "regularized-coulomb", "tabulated")


@dataclass(frozen=True)
class PotentialSpec:
    """A radial potential together with the bounds used to bracket eigenvalues.

    ``K1``/``K2`` are the constants of the lower/upper bounds
    ``-nu/r - K1 <= V <= K2``.  For tabulated data they default to values
    computed from the table.
    """

    kind: str
    nu: float = 0.0
    delta: float = 0.0
    table: tuple | None = field(default=None, repr=False)
    K1: float | None = None
    K2: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.nu < 0:
            raise ValueError("coupling nu must be nonnegative")
        if self.kind == "regularized-coulomb" and not self.delta > 0:
            raise ValueError("regularized-coulomb needs delta > 0")
        if self.kind == "tabulated":
            if self.table is None:
                raise ValueError("tabulated potential needs a table")
            r, v = (np.asarray(a, dtype=float) for a in self.table)
            if r.ndim != 1 or r.shape != v.shape or r.size < 2:
                raise ValueError("table must be two equal-length 1D columns")
            if np.any(np.diff(r) <= 0) or r[0] < 0:
                raise ValueError("tabulated radii must be nonnegative and strictly increasing")
            object.__setattr__(self, "table", (tuple(r), tuple(v)))
        if self.K1 is None:
            object.__setattr__(self, "K1", self._default_K1())
        if self.K2 is None:
            object.__setattr__(self, "K2", self._default_K2())

    @classmethod
    def coulomb(cls, nu: float) -> "PotentialSpec":
        return cls("coulomb", nu=nu)

    @classmethod
    def regularized_coulomb(cls, nu: float, delta: float) -> "PotentialSpec":
        return cls("regularized-coulomb", nu=nu, delta=delta)

    @classmethod
    def tabulated(cls, r, v, nu: float = 0.0) -> "PotentialSpec":
        return cls("tabulated", nu=nu, table=(tuple(np.asarray(r, float)), tuple(np.asarray(v, float))))

    @classmethod
    def from_file(cls, path, nu: float = 0.0) -> "PotentialSpec":
        """Read whitespace-delimited (radius, value) columns."""
        data = np.loadtxt(Path(path), ndmin=2)
        if data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns, got {data.shape[1]}")
        return cls.tabulated(data[:, 0], data[:, 1], nu=nu)

    def _default_K2(self) -> float:
        if self.kind == "tabulated":
            return max(0.0, float(np.max(self.table[1])))
        return 0.0

    def _default_K1(self) -> float:
        if self.kind != "tabulated":
            return 0.0
        r, v = (np.asarray(a) for a in self.table)
        with np.errstate(divide="ignore"):
            slack = -v - np.where(r > 0, self.nu / np.where(r > 0, r, 1.0), np.inf)
        return max(0.0, float(np.max(slack)))

    def __call__(self, r):
        return eval_potential(self, r)


def eval_potential(spec: PotentialSpec, r):
    """Evaluate V(r); vectorised over ``r``."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("radius must be nonnegative")
    if spec.kind == "coulomb":
        if np.any(r_arr == 0) and spec.nu != 0:
            raise SingularEvaluationError("Coulomb potential evaluated at r = 0")
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(r_arr > 0, -spec.nu / np.where(r_arr > 0, r_arr, 1.0), 0.0)
    elif spec.kind == "regularized-coulomb":
        out = -spec.nu / np.maximum(r_arr, spec.delta)
    else:
        rt, vt = (np.asarray(a) for a in spec.table)
        out = np.interp(r_arr, rt, vt)
        # Coulomb-like continuation keeps V -> 0 beyond the table.
        beyond = r_arr > rt[-1]
        out = np.where(beyond, vt[-1] * rt[-1] / np.where(beyond, r_arr, 1.0), out)
    return out if np.ndim(r) else float(out)
